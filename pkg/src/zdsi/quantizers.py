"""Scalar quantizer enumeration and zero-delay rate-distortion envelopes.

A scalar encoder is a partition of the source alphabet; its rate is the
optimal RI length of the induced (cell, side information) joint, and its
distortion is that of the Bayes decoder attached to each (cell, y) pair.
The achievable tradeoff is the lower convex envelope of the finite point
cloud; the causal variant swaps the rate functional for H(cell | Y) and the
encoder-side-information variant partitions the product alphabet instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import BelowMinimumDistortion, EmptyInput, TooLarge
from .probability import (
    Alphabet,
    DistortionMatrix,
    JointPMF,
    TriplePMF,
    ZERO,
    aggregate_rows,
    conditional_entropy_source_given_si,
    format_rational,
    normalized_support,
)
from .ri_codes import DEFAULT_SYMBOL_CAP, RIProtocol, solve_ri

PARTITION_CAP = 12  # Bell(12) ~ 4.2e6 partitions


@dataclass(frozen=True)
class Partition:
    """Set partition in restricted-growth form: cells[i] is symbol i's cell."""

    cells: tuple[int, ...]

    def __post_init__(self) -> None:
        seen = -1
        for c in self.cells:
            if c < 0 or c > seen + 1:
                raise ValueError(f"not a restricted-growth string: {self.cells}")
            seen = max(seen, c)

    @property
    def num_cells(self) -> int:
        return max(self.cells) + 1

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_cells)]
        for i, c in enumerate(self.cells):
            out[c].append(i)
        return out

    def to_string(self) -> str:
        return "-".join(str(c) for c in self.cells)


@dataclass(frozen=True)
class DecoderRule:
    """Reproduction index per (cell, SI) pair of positive induced probability."""

    table: dict[tuple[int, int], int]

    def __call__(self, cell: int, y: int) -> int:
        return self.table[(cell, y)]


@dataclass(frozen=True)
class QuantizerPoint:
    """One partition with its optimal decoder, exact rate and distortion."""

    partition: Partition
    decoder: DecoderRule
    rate: Fraction
    distortion: Fraction
    protocol: RIProtocol
    induced: JointPMF
    dmat: DistortionMatrix


@dataclass(frozen=True)
class RDCurve:
    """Piecewise-linear convex nonincreasing envelope; vertices (D, R)."""

    vertices: tuple[tuple[Fraction, object], ...]

    def query(self, d) -> object:
        """Envelope value at distortion d; exact interpolation on exact curves."""
        d = Fraction(d) if not isinstance(d, float) else d
        first_d = self.vertices[0][0]
        if d < first_d:
            raise BelowMinimumDistortion(
                f"distortion {d} below the minimum achievable {first_d}"
            )
        if d >= self.vertices[-1][0]:
            return self.vertices[-1][1]
        for (d1, r1), (d2, r2) in zip(self.vertices, self.vertices[1:]):
            if d1 <= d <= d2:
                return r1 + (r2 - r1) * (d - d1) / (d2 - d1)
        raise AssertionError("unreachable: vertices not ordered")


def query(curve: RDCurve, d) -> object:
    return curve.query(d)


def enumerate_partitions(alphabet) -> Iterator[Partition]:
    """All set partitions of the alphabet, restricted-growth lexicographic.

    Starts at the single-cell partition and ends at the all-singletons one;
    yields Bell(n) partitions.  Guarded at 12 symbols.
    """
    n = alphabet if isinstance(alphabet, int) else len(alphabet)
    if n > PARTITION_CAP:
        raise TooLarge(f"{n} symbols exceeds the partition cap {PARTITION_CAP}")
    if n == 0:
        return
    a = [0] * n
    while True:
        yield Partition(tuple(a))
        # lexicographic successor: bump the rightmost position below its prefix max + 1
        i = n - 1
        while i > 0:
            prefix_max = max(a[:i])
            if a[i] <= prefix_max:
                a[i] += 1
                for j in range(i + 1, n):
                    a[j] = 0
                break
            i -= 1
        else:
            return


def optimal_decoder(
    pmf: JointPMF, partition: Partition, d: DistortionMatrix
) -> tuple[DecoderRule, Fraction]:
    """Bayes decoder per (cell, y) pair with exact expected distortion.

    The reproduction minimizing the posterior expected distortion is chosen;
    ties break toward the lowest reproduction index.
    """
    blocks = partition.blocks()
    nrep = len(d.reproduction)
    table: dict[tuple[int, int], int] = {}
    total = ZERO
    for z, members in enumerate(blocks):
        for y in range(pmf.ncols):
            mass = sum((pmf.probs[x][y] for x in members), ZERO)
            if mass == 0:
                continue
            best_cost = None
            best_rep = 0
            for rep in range(nrep):
                cost = sum((pmf.probs[x][y] * d(x, rep) for x in members), ZERO)
                if best_cost is None or cost < best_cost:
                    best_cost = cost
                    best_rep = rep
            table[(z, y)] = best_rep
            total += best_cost
    return DecoderRule(table), total


def quantizer_point(
    pmf: JointPMF,
    partition: Partition,
    d: DistortionMatrix,
    solve_cap: int = DEFAULT_SYMBOL_CAP,
) -> QuantizerPoint:
    induced = aggregate_rows(pmf, partition.cells)
    protocol, rate = solve_ri(induced, max_symbols=solve_cap)
    decoder, distortion = optimal_decoder(pmf, partition, d)
    return QuantizerPoint(partition, decoder, rate, distortion, protocol, induced, d)


def rd_points(
    pmf: JointPMF, d: DistortionMatrix, solve_cap: int = DEFAULT_SYMBOL_CAP
) -> list[QuantizerPoint]:
    """One point per partition, each with its optimal decoder.

    Rate depends on the partition alone, so non-optimal decoders only produce
    dominated points and are skipped.  The single-cell partition is always
    present and anchors the envelope at rate exactly 0.
    """
    return [
        quantizer_point(pmf, partition, d, solve_cap)
        for partition in enumerate_partitions(pmf.source)
    ]


def _as_pairs(points) -> list[tuple]:
    pairs = []
    for p in points:
        if hasattr(p, "distortion"):
            pairs.append((p.distortion, p.rate))
        else:
            pairs.append((p[0], p[1]))
    return pairs


def lower_convex_envelope(points) -> RDCurve:
    """Lower-left convex hull of an (R, D) cloud after Pareto filtering."""
    pairs = _as_pairs(points)
    if not pairs:
        raise EmptyInput("no points to take an envelope of")
    pairs.sort(key=lambda t: (t[0], t[1]))
    staircase: list[tuple] = []
    for dd, rr in pairs:
        if not staircase or rr < staircase[-1][1]:
            staircase.append((dd, rr))
    hull: list[tuple] = []
    for pt in staircase:
        while len(hull) >= 2:
            (d1, r1), (d2, r2) = hull[-2], hull[-1]
            # drop the middle point when it lies on or above the chord
            if (d2 - d1) * (pt[1] - r1) - (r2 - r1) * (pt[0] - d1) <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    return RDCurve(tuple(hull))


def causal_rd_curve(pmf: JointPMF, d: DistortionMatrix) -> RDCurve:
    """Envelope of the causal cloud: rate functional H(cell | Y), binary64.

    Distortions stay exact; rates are floats because entropies are
    irrational, so downstream comparisons carry a 1e-9 tolerance.
    """
    points = []
    for partition in enumerate_partitions(pmf.source):
        induced = aggregate_rows(pmf, partition.cells)
        rate = conditional_entropy_source_given_si(induced)
        _, distortion = optimal_decoder(pmf, partition, d)
        points.append((distortion, rate))
    return lower_convex_envelope(points)


def encoder_si_points(
    triple: TriplePMF, d: DistortionMatrix, solve_cap: int = DEFAULT_SYMBOL_CAP
) -> list[QuantizerPoint]:
    """Quantizer cloud for an encoder observing (X, S), axes (S, X, Y).

    The encoder partitions the product alphabet X x S restricted to its
    support; distortion is measured on X alone through the decoder h(cell, y).
    """
    s_alpha, x_alpha, y_alpha = triple.alphabets
    labels = []
    rows = []
    x_of = []
    for x in range(len(x_alpha)):
        for s in range(len(s_alpha)):
            labels.append(f"{x_alpha.symbols[x]}|{s_alpha.symbols[s]}")
            rows.append(tuple(triple.probs[s][x][y] for y in range(len(y_alpha))))
            x_of.append(x)
    product_pmf = JointPMF(Alphabet("XS", tuple(labels)), y_alpha, tuple(rows))
    support, kept = normalized_support(product_pmf)
    x_of = [x_of[i] for i in kept]
    if support.nrows > PARTITION_CAP:
        raise TooLarge(
            f"{support.nrows} supported (x, s) pairs exceeds the partition cap "
            f"{PARTITION_CAP}"
        )
    # distortion matrix lifted to product rows so the Bayes decoder applies as is
    lifted = DistortionMatrix(
        support.source,
        d.reproduction,
        tuple(tuple(d(x_of[i], r) for r in range(len(d.reproduction))) for i in range(support.nrows)),
    )
    return [
        quantizer_point(support, partition, lifted, solve_cap)
        for partition in enumerate_partitions(support.source)
    ]


def encoder_si_rd_curve(
    triple: TriplePMF, d: DistortionMatrix, solve_cap: int = DEFAULT_SYMBOL_CAP
) -> RDCurve:
    return lower_convex_envelope(encoder_si_points(triple, d, solve_cap))


def export_curve_csv(curve: RDCurve, exact: bool = True) -> str:
    """CSV text: exact "D_num,D_den,R_num,R_den" or binary64 "D,R"."""
    if exact:
        lines = ["D_num,D_den,R_num,R_den"]
        for dd, rr in curve.vertices:
            dd, rr = Fraction(dd), Fraction(rr)
            lines.append(f"{dd.numerator},{dd.denominator},{rr.numerator},{rr.denominator}")
    else:
        lines = ["D,R"]
        for dd, rr in curve.vertices:
            lines.append(f"{float(dd)!r},{float(rr)!r}")
    return "\n".join(lines)


def export_points_csv(points: list[QuantizerPoint]) -> str:
    """Point cloud CSV with partition strings and decoder tables."""
    lines = ["partition,rate,distortion,decoder"]
    for p in points:
        decoder = ";".join(
            f"{z}.{y}->{p.dmat.reproduction.symbols[r]}"
            for (z, y), r in sorted(p.decoder.table.items())
        )
        lines.append(
            f"{p.partition.to_string()},{format_rational(p.rate)},"
            f"{format_rational(p.distortion)},{decoder}"
        )
    return "\n".join(lines)
