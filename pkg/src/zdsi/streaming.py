"""Bit-exact streaming codec: time-sharing two side-information-aware quantizers.

The encoder runs quantizer 1 for the first ceil(lambda * n) stages and
quantizer 2 for the rest, emitting each cell's RI codeword onto one flat
bitstream with no framing.  The decoder, knowing the schedule and its SI
symbol, parses instantaneously: it reads bits until the consumed string
equals the codeword of exactly one cell that has positive probability with
the observed y.  RI feasibility guarantees this always happens within the
longest candidate length; anything else is a SyncLoss contract violation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .errors import BelowMinimumDistortion, SyncLoss
from .probability import JointPMF, sample_iid
from .quantizers import QuantizerPoint, RDCurve


@dataclass(frozen=True)
class TimeSharePlan:
    """Two quantizer points and the exact mixing weight on the first.

    lambda_weight * D1 + (1 - lambda_weight) * D2 equals the target
    distortion; the schedule k_n = ceil(lambda * n) is shared by both sides,
    so no signaling is spent on it.
    """

    point1: QuantizerPoint
    point2: QuantizerPoint
    lambda_weight: Fraction

    @property
    def rate(self) -> Fraction:
        return (
            self.lambda_weight * self.point1.rate
            + (1 - self.lambda_weight) * self.point2.rate
        )

    @property
    def distortion(self) -> Fraction:
        return (
            self.lambda_weight * self.point1.distortion
            + (1 - self.lambda_weight) * self.point2.distortion
        )

    def stages_of_first(self, n: int) -> int:
        return min(n, ceil(self.lambda_weight * n))


@dataclass(frozen=True)
class SimReport:
    """Outcome of one streaming run; sync_errors is 0 for any feasible plan."""

    n: int
    total_bits: int
    rate: float
    distortion: float
    sync_errors: int
    trace: tuple | None = None

    def csv_row(self) -> str:
        return f"{self.n},{self.total_bits},{self.rate!r},{self.distortion!r},{self.sync_errors}"


def build_plan(curve: RDCurve, cloud, target_d) -> TimeSharePlan:
    """Pick the envelope vertices bracketing the target distortion.

    On a vertex (or beyond the zero-rate point) a single quantizer suffices
    and lambda is 1.  Below the leftmost vertex no plan exists.
    """
    target_d = Fraction(target_d)
    vertices = curve.vertices
    if target_d < vertices[0][0]:
        raise BelowMinimumDistortion(
            f"target {target_d} below minimum achievable {vertices[0][0]}"
        )

    def point_at(dd, rr) -> QuantizerPoint:
        for p in cloud:
            if p.distortion == dd and p.rate == rr:
                return p
        raise ValueError(f"no cloud point at (D={dd}, R={rr})")

    if target_d >= vertices[-1][0]:
        p = point_at(*vertices[-1])
        return TimeSharePlan(p, p, Fraction(1))
    for (d1, r1), (d2, r2) in zip(vertices, vertices[1:]):
        if d1 <= target_d <= d2:
            if target_d == d1:
                p = point_at(d1, r1)
                return TimeSharePlan(p, p, Fraction(1))
            if target_d == d2:
                p = point_at(d2, r2)
                return TimeSharePlan(p, p, Fraction(1))
            lam = (Fraction(d2) - target_d) / (Fraction(d2) - Fraction(d1))
            return TimeSharePlan(point_at(d1, r1), point_at(d2, r2), lam)
    raise AssertionError("unreachable: envelope vertices not ordered")


class _Codec:
    """Per-quantizer lookup tables shared by the encoder and decoder."""

    def __init__(self, point: QuantizerPoint):
        self.cells = point.partition.cells
        self.codewords = point.protocol.codewords
        induced = point.induced
        self.per_y: list[dict[str, int]] = []
        self.max_len: list[int] = []
        for y in range(induced.ncols):
            table = {
                self.codewords[z]: z
                for z in range(induced.nrows)
                if induced.probs[z][y] > 0
            }
            self.per_y.append(table)
            self.max_len.append(max((len(w) for w in table), default=0))
        self.decoder = point.decoder


class StreamEncoder:
    """Causal encoder: emits the scheduled quantizer's codeword for f_i(x_t)."""

    def __init__(self, plan: TimeSharePlan, n: int):
        self._codecs = (_Codec(plan.point1), _Codec(plan.point2))
        self._k = plan.stages_of_first(n)
        self.t = 0

    def encode_step(self, x: int) -> str:
        codec = self._codecs[0] if self.t < self._k else self._codecs[1]
        self.t += 1
        return codec.codewords[codec.cells[x]]


class StreamDecoder:
    """Causal decoder: parses the bitstream by shortest consistent codeword."""

    def __init__(self, plan: TimeSharePlan, n: int):
        self._codecs = (_Codec(plan.point1), _Codec(plan.point2))
        self._k = plan.stages_of_first(n)
        self.t = 0
        self.cursor = 0

    def decode_step(self, stream, y: int) -> tuple[int, int]:
        """Consume bits for one symbol; returns (reproduction index, bits used)."""
        codec = self._codecs[0] if self.t < self._k else self._codecs[1]
        self.t += 1
        table = codec.per_y[y]
        limit = codec.max_len[y]
        word = ""
        while word not in table:
            if len(word) >= limit or self.cursor >= len(stream):
                raise SyncLoss(
                    f"no candidate codeword matches at t={self.t - 1}, y={y}"
                )
            word += stream[self.cursor]
            self.cursor += 1
        z = table[word]
        return codec.decoder(z, y), len(word)


def run_simulation(
    pmf: JointPMF, plan: TimeSharePlan, n: int, seed: int, trace: bool = False
) -> SimReport:
    """Drive n i.i.d. pairs through the codec, verifying bit-exact sync.

    The decoder must consume exactly the emitted bit count at every stage;
    a mismatch raises SyncLoss rather than being tallied.  Distortion is
    measured with the distortion matrix the plan's points were built with.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    pairs = sample_iid(pmf, n, seed)
    encoder = StreamEncoder(plan, n)
    decoder = StreamDecoder(plan, n)
    dmat = plan.point1.dmat
    dfloat = [[float(v) for v in row] for row in dmat.values]
    stream: list[str] = []
    total_bits = 0
    dist_sum = 0.0
    rows: list[tuple] = []
    for t in range(n):
        x = int(pairs[t, 0])
        y = int(pairs[t, 1])
        word = encoder.encode_step(x)
        stream.extend(word)
        total_bits += len(word)
        xhat, used = decoder.decode_step(stream, y)
        if used != len(word) or decoder.cursor != total_bits:
            raise SyncLoss(f"decoder consumed {used} bits of {len(word)} at t={t}")
        dist_sum += dfloat[x][xhat]
        if trace:
            rows.append(
                (
                    t,
                    pmf.source.symbols[x],
                    pmf.si.symbols[y],
                    word,
                    dmat.reproduction.symbols[xhat],
                )
            )
    return SimReport(
        n=n,
        total_bits=total_bits,
        rate=total_bits / n,
        distortion=dist_sum / n,
        sync_errors=0,
        trace=tuple(rows) if trace else None,
    )


def export_trace_csv(pmf: JointPMF, plan: TimeSharePlan, report: SimReport) -> str:
    """Per-symbol trace CSV "t,x,y,z,codeword,xhat"."""
    if report.trace is None:
        raise ValueError("simulation was run without trace=True")
    k = plan.stages_of_first(report.n)
    lines = ["t,x,y,z,codeword,xhat"]
    for t, x, y, word, xhat in report.trace:
        point = plan.point1 if t < k else plan.point2
        z = point.partition.cells[pmf.source.symbols.index(x)]
        label = point.induced.source.symbols[z]
        lines.append(f"{t},{x},{y},{label},{word or 'ε'},{xhat}")
    return "\n".join(lines)
