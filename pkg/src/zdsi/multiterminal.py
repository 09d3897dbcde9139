"""Zero-delay two-encoder achievable region with exact membership queries.

Each base point fixes a partition of X and a partition of Y plus the order of
decoding.  Under order YX the Y-message is decoded first with no side
information (plain Huffman rate L(V)) and then serves as SI for the X-message
(RI rate L_V(U)); order XY is symmetric.  The region is the dominance-and-
convexity closure of both clouds; membership is an exact rational linear
feasibility problem whose basic solutions automatically give time-sharing
witnesses with support at most 5 (one weight per tableau row).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .probability import (
    DistortionMatrix,
    JointPMF,
    ONE,
    ZERO,
    aggregate_rows,
    format_rational,
    marginal_source,
    transpose,
)
from .quantizers import DecoderRule, Partition, enumerate_partitions
from .ri_codes import DEFAULT_SYMBOL_CAP, _huffman_codes, avg_length, solve_ri

ORDERS = ("YX", "XY")


@dataclass(frozen=True)
class MTPoint:
    """One (partition of X, partition of Y, order) operating point."""

    order: str
    partition_x: Partition
    partition_y: Partition
    decoder_x: DecoderRule
    decoder_y: DecoderRule
    rx: Fraction
    ry: Fraction
    dx: Fraction
    dy: Fraction

    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.rx, self.ry, self.dx, self.dy)


@dataclass(frozen=True)
class MTRegion:
    """Base point cloud; closure under time-sharing and coordinate increase
    is realized by the membership query, not materialized."""

    points: tuple[MTPoint, ...]


@dataclass(frozen=True)
class AchievabilityResult:
    achievable: bool
    witness: tuple[tuple[Fraction, MTPoint], ...] | None


def _positive_weight_huffman_length(weights) -> Fraction:
    support = [w for w in weights if w > 0]
    if len(support) <= 1:
        return ZERO
    codes = _huffman_codes(support)
    return avg_length(codes, support)


def _pair_joint(pmf: JointPMF, px: Partition, py: Partition) -> JointPMF:
    """Induced joint P(u, v) of the two cell indices."""
    rows_merged = aggregate_rows(pmf, px.cells)
    return transpose(aggregate_rows(transpose(rows_merged), py.cells, name="V"))


def _joint_decoders(
    pmf: JointPMF,
    px: Partition,
    py: Partition,
    d_x: DistortionMatrix,
    d_y: DistortionMatrix,
) -> tuple[DecoderRule, DecoderRule, Fraction, Fraction]:
    """Bayes decoders per (u, v) with exact expected distortions."""
    blocks_x = px.blocks()
    blocks_y = py.blocks()
    table_x: dict[tuple[int, int], int] = {}
    table_y: dict[tuple[int, int], int] = {}
    total_x = ZERO
    total_y = ZERO
    for u, xs in enumerate(blocks_x):
        for v, ys in enumerate(blocks_y):
            mass = sum((pmf.probs[x][y] for x in xs for y in ys), ZERO)
            if mass == 0:
                continue
            best, rep = None, 0
            for r in range(len(d_x.reproduction)):
                cost = sum(
                    (pmf.probs[x][y] * d_x(x, r) for x in xs for y in ys), ZERO
                )
                if best is None or cost < best:
                    best, rep = cost, r
            table_x[(u, v)] = rep
            total_x += best
            best, rep = None, 0
            for r in range(len(d_y.reproduction)):
                cost = sum(
                    (pmf.probs[x][y] * d_y(y, r) for x in xs for y in ys), ZERO
                )
                if best is None or cost < best:
                    best, rep = cost, r
            table_y[(u, v)] = rep
            total_y += best
    return DecoderRule(table_x), DecoderRule(table_y), total_x, total_y


def enumerate_mt_points(
    pmf: JointPMF,
    d_x: DistortionMatrix,
    d_y: DistortionMatrix,
    order: str,
    solve_cap: int = DEFAULT_SYMBOL_CAP,
) -> list[MTPoint]:
    """One point per (partition of X, partition of Y) pair for one order."""
    if order not in ORDERS:
        raise ValueError(f"order must be one of {ORDERS}, got {order!r}")
    points = []
    for px in enumerate_partitions(pmf.source):
        for py in enumerate_partitions(pmf.si):
            joint_uv = _pair_joint(pmf, px, py)
            if order == "YX":
                ry = _positive_weight_huffman_length(marginal_source(transpose(joint_uv)))
                _, rx = solve_ri(joint_uv, max_symbols=solve_cap)
            else:
                rx = _positive_weight_huffman_length(marginal_source(joint_uv))
                _, ry = solve_ri(transpose(joint_uv), max_symbols=solve_cap)
            gx, gy, dx, dy = _joint_decoders(pmf, px, py, d_x, d_y)
            points.append(MTPoint(order, px, py, gx, gy, rx, ry, dx, dy))
    return points


def simultaneous_points(
    pmf: JointPMF,
    d_x: DistortionMatrix,
    d_y: DistortionMatrix,
) -> list[MTPoint]:
    """Simpler variant: both messages Huffman-coded with no cross-SI.

    Exposed for comparison only; these points are not part of the region.
    """
    points = []
    for px in enumerate_partitions(pmf.source):
        for py in enumerate_partitions(pmf.si):
            joint_uv = _pair_joint(pmf, px, py)
            rx = _positive_weight_huffman_length(marginal_source(joint_uv))
            ry = _positive_weight_huffman_length(marginal_source(transpose(joint_uv)))
            gx, gy, dx, dy = _joint_decoders(pmf, px, py, d_x, d_y)
            points.append(MTPoint("SIM", px, py, gx, gy, rx, ry, dx, dy))
    return points


def build_region(
    pmf: JointPMF,
    d_x: DistortionMatrix,
    d_y: DistortionMatrix,
    solve_cap: int = DEFAULT_SYMBOL_CAP,
) -> MTRegion:
    """Base points of both transmission orders."""
    points = enumerate_mt_points(pmf, d_x, d_y, "YX", solve_cap)
    points += enumerate_mt_points(pmf, d_x, d_y, "XY", solve_cap)
    return MTRegion(tuple(points))


def _feasible_mixture(vectors, target) -> list[Fraction] | None:
    """Exact phase-1 simplex: weights lambda >= 0, sum 1, mix <= target.

    Bland's rule guarantees termination; a basic feasible solution has at
    most 5 nonzero weights (the tableau has 5 rows).
    """
    n = len(vectors)
    rows = 5
    # columns: n lambdas, 4 slacks, 5 artificials, rhs
    slack0, art0, rhs_col = n, n + 4, n + 9
    tableau = []
    for k in range(4):
        row = [Fraction(v[k]) for v in vectors]
        row += [ONE if j == k else ZERO for j in range(4)]
        row += [ZERO] * 5
        row.append(Fraction(target[k]))
        tableau.append(row)
    row = [ONE] * n + [ZERO] * 4 + [ZERO] * 5 + [ONE]
    tableau.append(row)
    for r in range(rows):
        if tableau[r][rhs_col] < 0:
            tableau[r] = [-v for v in tableau[r]]
        tableau[r][art0 + r] = ONE
    basis = [art0 + r for r in range(rows)]
    # phase-1 objective: minimize sum of artificials
    obj = [ZERO] * (rhs_col + 1)
    for r in range(rows):
        for j in range(rhs_col + 1):
            obj[j] -= tableau[r][j]
    for r in range(rows):
        obj[art0 + r] = ZERO

    while True:
        enter = next(
            (j for j in range(art0) if obj[j] < 0), None
        )
        if enter is None:
            break
        leave, best = None, None
        for r in range(rows):
            coef = tableau[r][enter]
            if coef > 0:
                ratio = tableau[r][rhs_col] / coef
                if best is None or ratio < best or (
                    ratio == best and basis[r] < basis[leave]
                ):
                    best, leave = ratio, r
        if leave is None:
            return None  # cannot happen in phase 1; defensive
        pivot = tableau[leave][enter]
        tableau[leave] = [v / pivot for v in tableau[leave]]
        for r in range(rows):
            if r != leave and tableau[r][enter] != 0:
                f = tableau[r][enter]
                tableau[r] = [a - f * b for a, b in zip(tableau[r], tableau[leave])]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [a - f * b for a, b in zip(obj, tableau[leave])]
        basis[leave] = enter

    if obj[rhs_col] != 0:
        return None
    weights = [ZERO] * n
    for r, b in enumerate(basis):
        if b < n:
            weights[b] = tableau[r][rhs_col]
    return weights


def is_achievable(region: MTRegion, target) -> AchievabilityResult:
    """Exact membership test with a Caratheodory witness of support <= 5.

    target is a quadruple (Rx, Ry, Dx, Dy); achievable iff some convex
    combination of base points is coordinate-wise <= target.
    """
    target = tuple(Fraction(t) for t in target)
    vectors = [p.coords for p in region.points]
    weights = _feasible_mixture(vectors, target)
    if weights is None:
        return AchievabilityResult(False, None)
    witness = tuple(
        (w, region.points[i]) for i, w in enumerate(weights) if w > 0
    )
    return AchievabilityResult(True, witness)


def pareto_surface(region: MTRegion) -> list[MTPoint]:
    """Base points undominated under the coordinate-wise 4-D partial order."""
    points = list(region.points)
    out = []
    for i, p in enumerate(points):
        dominated = False
        for j, q in enumerate(points):
            if i == j:
                continue
            if all(qc <= pc for qc, pc in zip(q.coords, p.coords)) and (
                q.coords != p.coords or j < i
            ):
                dominated = True
                break
        if not dominated:
            out.append(p)
    return out


def export_region_csv(region: MTRegion) -> str:
    lines = ["order,Rx,Ry,Dx,Dy,partitionX,partitionY"]
    for p in region.points:
        lines.append(
            f"{p.order},{format_rational(p.rx)},{format_rational(p.ry)},"
            f"{format_rational(p.dx)},{format_rational(p.dy)},"
            f"{p.partition_x.to_string()},{p.partition_y.to_string()}"
        )
    return "\n".join(lines)


def export_witness_csv(witness) -> str:
    lines = ["weight,order,Rx,Ry,Dx,Dy,partitionX,partitionY"]
    for w, p in witness:
        lines.append(
            f"{format_rational(w)},{p.order},{format_rational(p.rx)},"
            f"{format_rational(p.ry)},{format_rational(p.dx)},{format_rational(p.dy)},"
            f"{p.partition_x.to_string()},{p.partition_y.to_string()}"
        )
    return "\n".join(lines)
