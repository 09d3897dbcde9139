"""Restricted-input instantaneous codes and their exact optimal lengths.

An RI codeword assignment must keep the equal-or-prefix condition only across
edges of the characteristic graph: given the side information, the decoder
only ever disambiguates confusable symbols.  The empty codeword is therefore
legal exactly on isolated vertices.

The optimal average length L_Y is found by best-first branch-and-bound:
symbols are assigned in decreasing-probability order, the incumbent starts at
the (always feasible) Huffman code, and a symbol's candidate lengths are
capped by the exact remaining budget
    P(x) * len < incumbent - committed - sum of 1-bit reservations
for the still-unassigned non-isolated symbols.  Since codeword design is
NP-hard in general, the solver refuses instances above a configurable symbol
cap instead of silently falling back to a heuristic.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import DomainError, TooLarge
from .graphs import CharacteristicGraph, build_characteristic_graph
from .probability import (
    Alphabet,
    JointPMF,
    TriplePMF,
    ZERO,
    format_rational,
    marginal_source,
    normalized_support,
)

DEFAULT_SYMBOL_CAP = 10


def codewords_conflict(a: str, b: str) -> bool:
    """True iff the codewords are equal or one is a prefix of the other."""
    return a.startswith(b) or b.startswith(a)


@dataclass(frozen=True)
class RIProtocol:
    """Codeword per symbol index plus the exact average length it achieves."""

    codewords: tuple[str, ...]
    average_length: Fraction


def check_feasible(assignment, g: CharacteristicGraph) -> bool:
    """Check the per-edge no-prefix condition for a total codeword assignment."""
    words = tuple(assignment)
    return all(not codewords_conflict(words[u], words[v]) for u, v in g.edges)


def avg_length(assignment, p_x) -> Fraction:
    """Exact expected codeword length sum(P(x) * |phi(x)|)."""
    return sum(
        (Fraction(p) * len(w) for p, w in zip(p_x, assignment)), ZERO
    )


def _huffman_codes(weights) -> list[str]:
    """Huffman codewords for positive weights (Fraction or float).

    Ties merge the nodes whose subtree holds the lowest original symbol
    index; the first node popped becomes the 0-branch.  A single symbol gets
    the empty codeword.
    """
    n = len(weights)
    if n == 1:
        return [""]
    heap: list[tuple] = [(w, i, i) for i, w in enumerate(weights)]
    heapq.heapify(heap)
    while len(heap) > 1:
        wa, ia, na = heapq.heappop(heap)
        wb, ib, nb = heapq.heappop(heap)
        heapq.heappush(heap, (wa + wb, min(ia, ib), (na, nb)))
    codes = [""] * n
    stack = [(heap[0][2], "")]
    while stack:
        node, prefix = stack.pop()
        if isinstance(node, int):
            codes[node] = prefix
        else:
            left, right = node
            stack.append((left, prefix + "0"))
            stack.append((right, prefix + "1"))
    return codes


def huffman(p) -> tuple[tuple[str, ...], Fraction]:
    """Optimal prefix-free code and its exact average length L(X)."""
    p = tuple(Fraction(v) for v in p)
    if any(v <= 0 for v in p):
        raise DomainError("huffman requires strictly positive probabilities")
    if sum(p, ZERO) != 1:
        raise DomainError("huffman requires probabilities summing to 1")
    codes = tuple(_huffman_codes(p))
    return codes, avg_length(codes, p)


def _bit_strings(length: int, first_bit: str | None = None):
    """All bit strings of the given length in lexicographic order."""
    if first_bit is None:
        for bits in product("01", repeat=length):
            yield "".join(bits)
    else:
        for bits in product("01", repeat=length - 1):
            yield first_bit + "".join(bits)


def solve_ri(
    pmf: JointPMF, max_symbols: int = DEFAULT_SYMBOL_CAP
) -> tuple[RIProtocol, Fraction]:
    """Exact minimum-average-length RI protocol for P(x, y).

    Source symbols with zero marginal probability are isolated in the
    characteristic graph and receive the empty codeword, so the returned
    protocol is total on the input alphabet.  Raises TooLarge when the
    support exceeds ``max_symbols`` (raise it knowingly for bigger runs;
    worst-case time is exponential).
    """
    support, kept = normalized_support(pmf)
    if support.nrows > max_symbols:
        raise TooLarge(
            f"{support.nrows} supported symbols exceeds the exactness cap "
            f"{max_symbols}; pass max_symbols to raise it knowingly"
        )
    g = build_characteristic_graph(support)
    p = marginal_source(support)
    order = sorted(
        (v for v in range(support.nrows) if not g.is_isolated(v)),
        key=lambda v: (-p[v], v),
    )

    # incumbent: Huffman on the support, isolated vertices overridden to the
    # empty codeword (feasible: edges only involve non-isolated vertices)
    assigned: dict[int, str] = {v: "" for v in range(support.nrows) if g.is_isolated(v)}
    best_words = dict(assigned)
    huff = _huffman_codes(p)
    for v in order:
        best_words[v] = huff[v]
    best_value = sum((p[v] * len(best_words[v]) for v in order), ZERO)

    # 1-bit reservation for each unassigned non-isolated symbol
    reserve = [ZERO] * (len(order) + 1)
    for i in range(len(order) - 1, -1, -1):
        reserve[i] = reserve[i + 1] + p[order[i]]

    adjacency = g.adjacency

    def recurse(pos: int, committed: Fraction) -> None:
        nonlocal best_value, best_words
        if pos == len(order):
            best_value = committed
            best_words = dict(assigned)
            return
        v = order[pos]
        rest = reserve[pos + 1]
        neighbors = [u for u in range(support.nrows) if adjacency[v] >> u & 1 and u in assigned]
        neighbor_span = max((len(assigned[u]) for u in neighbors), default=0)
        length = 1
        while True:
            budget = best_value - committed - rest
            if budget <= 0:
                return
            quota = budget / p[v]
            lmax = quota.numerator // quota.denominator
            if quota.denominator == 1:
                lmax -= 1  # strict improvement only
            if length > lmax:
                return
            # global 0/1 relabeling symmetry: root explores 0-rooted words only
            first_bit = "0" if pos == 0 else None
            any_feasible = False
            for word in _bit_strings(length, first_bit):
                if any(codewords_conflict(word, assigned[u]) for u in neighbors):
                    continue
                any_feasible = True
                assigned[v] = word
                recurse(pos + 1, committed + p[v] * length)
                del assigned[v]
            # once past every neighbor's length, conflicts come only from
            # neighbor words being prefixes; a fully blocked level stays
            # blocked at every longer length
            if not any_feasible and length >= neighbor_span:
                return
            length += 1

    recurse(0, ZERO)

    # re-embed onto the original alphabet; stripped symbols get the empty word
    words = [""] * pmf.nrows
    for local, original in enumerate(kept):
        words[original] = best_words[local]
    return RIProtocol(tuple(words), best_value), best_value


def solve_ri_conditional(
    triple: TriplePMF, max_symbols: int = DEFAULT_SYMBOL_CAP
) -> Fraction:
    """L_Y(X|Z) for a triple distributed over axes (X, Y, Z).

    Exact expectation over z of the optimal RI length for the conditional
    (X, Y) joint; z symbols of zero probability contribute nothing.
    """
    out = ZERO
    for k, mass in enumerate(triple.marginal(2)):
        if mass > 0:
            _, value = solve_ri(triple.pair_joint_given(2, k), max_symbols)
            out += mass * value
    return out


def conditional_huffman(pmf: JointPMF) -> Fraction:
    """L(X|Z) for a pair pmf over (X, Z): per-z Huffman, averaged exactly."""
    out = ZERO
    for k in range(pmf.ncols):
        col = [pmf.probs[i][k] for i in range(pmf.nrows)]
        mass = sum(col, ZERO)
        if mass > 0:
            weights = [v / mass for v in col if v > 0]
            _, length = huffman(weights)
            out += mass * length
    return out


def export_protocol(source: Alphabet, p_x, protocol: RIProtocol) -> str:
    """Text lines "symbol codeword length probability"; empty word shown as ε."""
    lines = []
    for sym, p, w in zip(source.symbols, p_x, protocol.codewords):
        shown = w if w else "ε"
        lines.append(f"{sym} {shown} {len(w)} {format_rational(Fraction(p))}")
    return "\n".join(lines)
