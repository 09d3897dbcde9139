"""Shared test helpers: random exact-rational instances and independent oracles.

The oracles deliberately avoid the library's solver paths: confusability,
feasibility, and optimality are recomputed from first principles so the
equality tests mean something.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from zdsi.probability import Alphabet, JointPMF, TriplePMF, integer_alphabet


def rand_joint_pmf(rng: random.Random, nx: int, ny: int, max_weight: int = 3) -> JointPMF:
    """Random exact-rational joint pmf; every source row has positive mass."""
    while True:
        weights = [
            [rng.choice([0, 0, 1, 2, max_weight]) for _ in range(ny)]
            for _ in range(nx)
        ]
        if all(any(row) for row in weights):
            break
    total = sum(map(sum, weights))
    probs = [[Fraction(w, total) for w in row] for row in weights]
    return JointPMF(
        integer_alphabet("X", nx), integer_alphabet("Y", ny), tuple(map(tuple, probs))
    )


def rand_triple_pmf(
    rng: random.Random, na: int, nb: int, nc: int, max_weight: int = 3
) -> TriplePMF:
    """Random exact-rational triple pmf over axes (A, B, C)."""
    while True:
        weights = [
            [[rng.choice([0, 1, 1, 2, max_weight]) for _ in range(nc)] for _ in range(nb)]
            for _ in range(na)
        ]
        if sum(v for p in weights for r in p for v in r) > 0:
            break
    total = sum(v for p in weights for r in p for v in r)
    probs = tuple(
        tuple(tuple(Fraction(v, total) for v in row) for row in plane)
        for plane in weights
    )
    alphabets = (
        integer_alphabet("A", na),
        integer_alphabet("B", nb),
        integer_alphabet("C", nc),
    )
    return TriplePMF(alphabets, probs)


def oracle_confusability(pmf: JointPMF) -> list[list[bool]]:
    n = pmf.nrows
    conf = [[False] * n for _ in range(n)]
    for j in range(pmf.ncols):
        support = [i for i in range(n) if pmf.probs[i][j] > 0]
        for a in support:
            for b in support:
                if a != b:
                    conf[a][b] = True
    return conf


def _conflict(a: str, b: str) -> bool:
    return a.startswith(b) or b.startswith(a)


def oracle_optimal_ri_length(pmf: JointPMF, max_len: int = 3) -> Fraction:
    """Exhaustive minimum average RI length over codewords of length <= max_len.

    The empty codeword is offered only where no confusability constraint
    exists.  Partial assignments that already violate an edge are pruned;
    that keeps the search exhaustive over feasible completions.  Length 3
    suffices for optimality up to 4 symbols; 5-symbol instances can need
    length 4 (a skewed complete graph forces Huffman depth 4).
    """
    support_rows = [i for i in range(pmf.nrows) if sum(pmf.probs[i], Fraction(0)) > 0]
    sub = JointPMF(
        Alphabet("S", tuple(str(i) for i in support_rows)),
        pmf.si,
        tuple(pmf.probs[i] for i in support_rows),
    )
    n = sub.nrows
    p = [sum(row, Fraction(0)) for row in sub.probs]
    conf = oracle_confusability(sub)
    isolated = [not any(conf[v]) for v in range(n)]
    pool = [
        "".join(bits)
        for length in range(1, max_len + 1)
        for bits in product("01", repeat=length)
    ]
    # heaviest symbols first makes the running-total cut bite early; the
    # enumeration stays exhaustive over feasible assignments
    order = sorted(range(n), key=lambda v: (-p[v], v))
    best: list[Fraction | None] = [None]
    words: dict[int, str] = {}

    def rec(i: int, total: Fraction) -> None:
        if best[0] is not None and total >= best[0]:
            return
        if i == n:
            best[0] = total
            return
        v = order[i]
        candidates = ([""] if isolated[v] else []) + pool
        for w in candidates:
            if any(conf[v][u] and _conflict(w, wu) for u, wu in words.items()):
                continue
            words[v] = w
            rec(i + 1, total + p[v] * len(w))
            del words[v]

    rec(0, Fraction(0))
    assert best[0] is not None, "oracle found no feasible assignment"
    return best[0]


def oracle_best_decoder_distortion(pmf: JointPMF, cells, dmat) -> Fraction:
    """Minimum expected distortion over ALL decoder rules for a partition.

    Enumerates every mapping (cell, y) -> reproduction on positive pairs;
    exponential, for tiny instances only.
    """
    k = max(cells) + 1
    members = [[i for i, c in enumerate(cells) if c == c_] for c_ in range(k)]
    pairs = []
    for z in range(k):
        for y in range(pmf.ncols):
            if sum((pmf.probs[x][y] for x in members[z]), Fraction(0)) > 0:
                pairs.append((z, y))
    nrep = len(dmat.reproduction)
    best = None
    for choice in product(range(nrep), repeat=len(pairs)):
        total = Fraction(0)
        for (z, y), rep in zip(pairs, choice):
            total += sum(
                (pmf.probs[x][y] * dmat(x, rep) for x in members[z]), Fraction(0)
            )
        if best is None or total < best:
            best = total
    return best
