"""Certified winding numbers and Poincare-Hopf block indices.

The degree of the field direction map along a boundary loop is computed by
certified angle accumulation: each loop segment is refined until the field
enclosure over the piece misses the origin, which confines the field to an
open half-plane and bounds the angle variation on the piece below pi.  The
signed principal angle between consecutive endpoint values is then
enclosed with 128-bit interval atan2, and the loop total must land within
a quarter period of an integer multiple of 2*pi for the degree to be
accepted.

The index of a block is the sum of the winding numbers of its boundary
loops taken with the interior-on-the-left orientation, which makes hole
contributions enter with the correct sign automatically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .blocks import (
    BoundaryLoop,
    ScalarZeros,
    Segment,
    ZeroBlock,
    certify_boundary,
    certify_isolating,
    isolate_zeros,
)
from .errors import CertificationError, FalsificationError
from .expr import Expr, ExactEvalError
from .fields import VectorField, dot, wedge
from .intervals import Box, EnclosureError, HALF_PI, Interval, TWO_PI, atan2_range


@dataclass(frozen=True)
class LoopWinding:
    winding: int
    pieces: int
    angle_sum: Interval
    max_piece_width: Fraction


@dataclass(frozen=True)
class IndexReport:
    block: str
    index: int
    loops: tuple[LoopWinding, ...]
    method: str = "winding"

    @property
    def angle_sum(self) -> Interval:
        return Interval(
            sum((lw.angle_sum.lo for lw in self.loops), Fraction(0)),
            sum((lw.angle_sum.hi for lw in self.loops), Fraction(0)),
        )


_MAX_SEG_REFINE = 42
_MAX_INC_WIDTH = Fraction(4, 5)  # radians; keeps atan2 away from the branch cut
_GATE_RETRIES = 3


def _value_enclosure(field: VectorField, p) -> tuple[Interval, Interval]:
    try:
        vx, vy = field.eval_at(p)
        return (Interval.point(vx), Interval.point(vy))
    except ExactEvalError:
        box = Box(Interval.point(p[0]), Interval.point(p[1]))
        return field.range_on(box)


def _segment_increments(
    field: VectorField,
    seg: Segment,
    level: int,
    out: list[Interval],
    max_width: Fraction,
):
    """Append certified angle increments covering the directed segment."""
    if level > _MAX_SEG_REFINE:
        raise CertificationError(
            f"zero too close to boundary: segment near ({float(seg.x0):.6g}, {float(seg.y0):.6g})"
        )
    rx, ry = field.range_on(seg.box())
    if not (rx.excludes_zero() or ry.excludes_zero()):
        a, b = seg.halves()
        _segment_increments(field, a, level + 1, out, max_width)
        _segment_increments(field, b, level + 1, out, max_width)
        return
    ux, uy = _value_enclosure(field, seg.start)
    vx, vy = _value_enclosure(field, seg.end)
    cross = ux * vy - uy * vx
    dotv = ux * vx + uy * vy
    try:
        inc = atan2_range(cross, dotv)
    except EnclosureError:
        inc = None
    if inc is None or inc.width() > max_width:
        a, b = seg.halves()
        _segment_increments(field, a, level + 1, out, max_width)
        _segment_increments(field, b, level + 1, out, max_width)
        return
    out.append(inc)


def winding_number(field: VectorField, loop: BoundaryLoop) -> int:
    """Exact degree of the field direction map along the closed loop."""
    return _loop_winding(field, loop).winding


def _loop_winding(field: VectorField, loop: BoundaryLoop) -> LoopWinding:
    max_width = _MAX_INC_WIDTH
    for _ in range(_GATE_RETRIES + 1):
        increments: list[Interval] = []
        for seg in loop.segments:
            _segment_increments(field, seg, 0, increments, max_width)
        total = Interval(
            sum((i.lo for i in increments), Fraction(0)),
            sum((i.hi for i in increments), Fraction(0)),
        )
        mid = total.midpoint()
        k = int(round(mid / TWO_PI.midpoint()))
        lower = TWO_PI * k - HALF_PI
        upper = TWO_PI * k + HALF_PI
        if total.lo > lower.hi and total.hi < upper.lo:
            return LoopWinding(
                winding=k,
                pieces=len(increments),
                angle_sum=total,
                max_piece_width=max((i.width() for i in increments), default=Fraction(0)),
            )
        # widen certification by refining every piece before giving up
        max_width = max_width / 8
    raise CertificationError(
        f"winding sum {float(total.lo):.4f}..{float(total.hi):.4f} not within a "
        f"quarter period of 2*pi*{k} after {_GATE_RETRIES} refinement passes"
    )


def block_index(field: VectorField, block: ZeroBlock) -> IndexReport:
    """Certified Poincare-Hopf index of the field on the block.

    Requires the block boundary to be certifiable for this field; the
    index is then the sum over boundary loops (interior-left orientation).
    """
    if block.coarse:
        raise CertificationError(f"block {block.label} is coarse; refine the isolation")
    cert = certify_isolating(field, block)
    if not cert.ok:
        raise CertificationError(
            f"block {block.label} is not isolating for this field (segment at "
            f"({float(cert.offending.x0):.6g}, {float(cert.offending.y0):.6g}))"
        )
    loops = tuple(_loop_winding(field, lp) for lp in block.boundary)
    return IndexReport(
        block=block.label,
        index=sum(lw.winding for lw in loops),
        loops=loops,
    )


def region_boundary_loop(region: Box) -> BoundaryLoop:
    """Counterclockwise rectangle boundary of the region."""
    x0, x1 = region.x.lo, region.x.hi
    y0, y1 = region.y.lo, region.y.hi
    return BoundaryLoop(
        (
            Segment(x0, y0, x1, y0),
            Segment(x1, y0, x1, y1),
            Segment(x1, y1, x0, y1),
            Segment(x0, y1, x0, y0),
        )
    )


def region_index(field: VectorField, region: Box, max_depth: int) -> int:
    """Sum of block indices inside the region; checked against the direct
    winding of the field along the region boundary."""
    if field.domain == "torus":
        raise ValueError("region_index applies to plane regions; the torus has no boundary")
    loop = region_boundary_loop(region)
    boundary_winding = winding_number(field, loop)
    result = isolate_zeros(field, region, max_depth)
    total = 0
    for blk in result.blocks:
        if blk.coarse:
            raise CertificationError(f"coarse block {blk.label} at depth {max_depth}")
        total += block_index(field, blk).index
    if total != boundary_winding:
        raise FalsificationError(
            f"block index sum {total} != region boundary winding {boundary_winding}"
        )
    return total


# ---------------------------------------------------------------------------
# index transfer certificates


MODE_NO_NEGATIVE_RATIO = "no-negative-ratio"
MODE_NO_POSITIVE_RATIO = "no-positive-ratio"


@dataclass(frozen=True)
class TransferReport:
    mode: str
    certified: bool
    pieces: int
    index_x: Optional[int]
    index_y: Optional[int]
    failed_segment: Optional[Segment] = None

    @property
    def indices_equal(self) -> bool:
        return self.certified and self.index_x == self.index_y


def _never_ratio_cert(wedge_expr: Expr, dot_expr: Expr, seg: Segment, sign: int, level: int) -> int:
    """Count certified pieces proving X != lambda*Y on the segment for
    lambda of the given sign (sign=-1 forbids antiparallel points)."""
    if level > _MAX_SEG_REFINE:
        raise CertificationError("inconclusive transfer segment at refinement limit")
    box = seg.box()
    w = wedge_expr.range_on(box)
    if w.excludes_zero():
        return 1
    d = dot_expr.range_on(box)
    if (sign < 0 and d.lo > 0) or (sign > 0 and d.hi < 0):
        return 1
    a, b = seg.halves()
    return _never_ratio_cert(wedge_expr, dot_expr, a, sign, level + 1) + _never_ratio_cert(
        wedge_expr, dot_expr, b, sign, level + 1
    )


def index_transfer_check(
    x_field: VectorField,
    y_field: VectorField,
    block: ZeroBlock,
    mode: str = MODE_NO_NEGATIVE_RATIO,
) -> TransferReport:
    """Certify on the block boundary that X is never a negative (mode
    no-negative-ratio) or positive (mode no-positive-ratio) multiple of Y;
    on success both indices are computed and asserted equal.

    The straight-line deformation between X and Y (or -Y) then has no zero
    on the boundary, which is exactly what makes the two indices agree.
    """
    if mode not in (MODE_NO_NEGATIVE_RATIO, MODE_NO_POSITIVE_RATIO):
        raise ValueError(f"unknown mode {mode!r}")
    sign = -1 if mode == MODE_NO_NEGATIVE_RATIO else +1
    for f in (x_field, y_field):
        cert = certify_isolating(f, block)
        if not cert.ok:
            raise CertificationError("block is not isolating for both fields")
    w = wedge(x_field, y_field)
    d = dot(x_field, y_field)
    pieces = 0
    try:
        for loop in block.boundary:
            for seg in loop.segments:
                pieces += _never_ratio_cert(w, d, seg, sign, 0)
    except CertificationError:
        return TransferReport(mode, False, pieces, None, None)
    ix = block_index(x_field, block).index
    iy = block_index(y_field, block).index
    if ix != iy:
        raise FalsificationError(
            f"transfer certified but indices differ: {ix} != {iy} (mode {mode})"
        )
    return TransferReport(mode, True, pieces, ix, iy)


@dataclass(frozen=True)
class ScalarFactorReport:
    index_y: int
    index_scaled: int
    factor_sign_certified: bool

    @property
    def implication_holds(self) -> bool:
        return self.index_y != 0 or self.index_scaled == 0


def scalar_factor_index_check(y_field: VectorField, factor: Expr, block: ZeroBlock) -> ScalarFactorReport:
    """Check the scalar-multiplier index implication on a block.

    With X := factor * Y and factor certified nonvanishing on the block
    boundary, a zero index for Y forces a zero index for X; both indices
    are computed and the implication asserted.
    """
    cert = certify_boundary(ScalarZeros(factor), block.boundary)
    if not cert.ok:
        raise CertificationError("factor sign could not be certified on the boundary")
    scaled = y_field.scale(factor)
    iy = block_index(y_field, block).index
    ix = block_index(scaled, block).index
    if iy == 0 and ix != 0:
        raise FalsificationError(f"index of scaled field is {ix} despite index 0 for Y")
    return ScalarFactorReport(index_y=iy, index_scaled=ix, factor_sign_certified=True)
