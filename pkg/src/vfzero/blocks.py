"""Certified isolation of zero sets by quadtree subdivision.

A region is subdivided until every cell either carries an interval
certificate that the target set (zeros of a field, of a scalar, or common
zeros of several fields) misses it, or the maximum depth is reached.
Cells that survive at full depth are grouped into connected blocks; the
oriented boundary of each block's cell union is extracted and certified
nonvanishing segment by segment.  Everything is exact: cells are dyadic
subdivisions of the rational region, so adjacency and boundary extraction
are integer computations.

Cells touching only at a corner are treated as adjacent when grouping, so
the closed unions of distinct blocks are genuinely disjoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import CertificationError
from .expr import Expr
from .fields import VectorField
from .intervals import Box, Interval

Cell = tuple[int, int]

# An emptiness certificate: (label of the component that excludes zero,
# the excluding enclosure).
EmptyCert = tuple[str, Interval]


# ---------------------------------------------------------------------------
# zero-set descriptions


class FieldZeros:
    """Zero set of a vector field: a box is empty when one component's
    enclosure excludes zero."""

    def __init__(self, field: VectorField):
        self.field = field
        self.domain = field.domain

    def empty_certificate(self, box: Box) -> Optional[EmptyCert]:
        rx = self.field.cx.range_on(box)
        if rx.excludes_zero():
            return ("cx", rx)
        ry = self.field.cy.range_on(box)
        if ry.excludes_zero():
            return ("cy", ry)
        return None


class ScalarZeros:
    """Zero set of a single scalar expression."""

    def __init__(self, expr: Expr):
        self.expr = expr
        self.domain = expr.domain

    def empty_certificate(self, box: Box) -> Optional[EmptyCert]:
        r = self.expr.range_on(box)
        if r.excludes_zero():
            return ("value", r)
        return None


class CommonZeros:
    """Simultaneous zeros of several fields: empty when any generator is
    certified nonvanishing on the box."""

    def __init__(self, fields: Sequence[VectorField]):
        if not fields:
            raise ValueError("no generators")
        self.fields = tuple(fields)
        self.domain = self.fields[0].domain

    def empty_certificate(self, box: Box) -> Optional[EmptyCert]:
        for k, f in enumerate(self.fields):
            rx = f.cx.range_on(box)
            if rx.excludes_zero():
                return (f"gen{k}.cx", rx)
            ry = f.cy.range_on(box)
            if ry.excludes_zero():
                return (f"gen{k}.cy", ry)
        return None


# ---------------------------------------------------------------------------
# geometry


@dataclass(frozen=True)
class Segment:
    """Directed axis-aligned segment with exact endpoints."""

    x0: Fraction
    y0: Fraction
    x1: Fraction
    y1: Fraction

    def box(self) -> Box:
        return Box(
            Interval(min(self.x0, self.x1), max(self.x0, self.x1)),
            Interval(min(self.y0, self.y1), max(self.y0, self.y1)),
        )

    def halves(self) -> tuple["Segment", "Segment"]:
        mx = (self.x0 + self.x1) / 2
        my = (self.y0 + self.y1) / 2
        return (
            Segment(self.x0, self.y0, mx, my),
            Segment(mx, my, self.x1, self.y1),
        )

    @property
    def start(self) -> tuple[Fraction, Fraction]:
        return (self.x0, self.y0)

    @property
    def end(self) -> tuple[Fraction, Fraction]:
        return (self.x1, self.y1)


@dataclass(frozen=True)
class BoundaryLoop:
    """One closed boundary curve, oriented with the block interior on its
    left (outer loops run counterclockwise, hole loops clockwise)."""

    segments: tuple[Segment, ...]


@dataclass(frozen=True)
class Grid:
    """Dyadic cell grid over a region."""

    region: Box
    depth: int
    torus: bool

    @property
    def n(self) -> int:
        return 1 << self.depth

    def cell_box(self, cell: Cell) -> Box:
        i, j = cell
        wx = self.region.x.width() / self.n
        wy = self.region.y.width() / self.n
        return Box(
            Interval(self.region.x.lo + i * wx, self.region.x.lo + (i + 1) * wx),
            Interval(self.region.y.lo + j * wy, self.region.y.lo + (j + 1) * wy),
        )

    def wrap(self, cell: Cell) -> Cell:
        if self.torus:
            return (cell[0] % self.n, cell[1] % self.n)
        return cell

    def neighbors8(self, cell: Cell):
        i, j = cell
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                if di == 0 and dj == 0:
                    continue
                c = (i + di, j + dj)
                if self.torus:
                    yield self.wrap(c)
                elif 0 <= c[0] < self.n and 0 <= c[1] < self.n:
                    yield c

    def vertex_point(self, i: int, j: int) -> tuple[Fraction, Fraction]:
        return (
            self.region.x.lo + Fraction(i, self.n) * self.region.x.width(),
            self.region.y.lo + Fraction(j, self.n) * self.region.y.width(),
        )


@dataclass(frozen=True)
class ZeroBlock:
    """Connected union of certified cells covering one component of the
    target zero set, with its certified boundary."""

    label: str
    domain: str
    region: Box
    resolution: int
    cells: tuple[Cell, ...]
    boxes: tuple[Box, ...]
    boundary: tuple[BoundaryLoop, ...]
    coarse: bool
    certificate: Optional[tuple]

    def hull(self) -> Box:
        xs = [b.x for b in self.boxes]
        ys = [b.y for b in self.boxes]
        return Box(Interval.hull(xs), Interval.hull(ys))

    def grid(self) -> Grid:
        return Grid(self.region, self.resolution, self.domain == "torus")

    def contains_point(self, p) -> bool:
        return any(b.contains_point(p) for b in self.boxes)

    def intersects_block(self, other: "ZeroBlock") -> bool:
        """Closed box-unions intersect (used for zero-set witnesses)."""
        return any(a.intersects(b) for a in self.boxes for b in other.boxes)


@dataclass(frozen=True)
class IsolationResult:
    blocks: tuple[ZeroBlock, ...]
    empty_boxes: tuple[tuple[Box, str, Interval], ...]
    region: Box
    max_depth: int

    @property
    def fully_certified_empty(self) -> bool:
        return not self.blocks


@dataclass(frozen=True)
class CertifyResult:
    ok: bool
    pieces: int
    offending: Optional[Segment]
    per_segment: tuple

    def __bool__(self) -> bool:
        return self.ok


# ---------------------------------------------------------------------------
# subdivision


def _subdivide(problem, region: Box, max_depth: int):
    """Quadtree subdivision; returns (retained finest-depth cells, list of
    certified-empty (box, label, enclosure)).  Deterministic traversal."""
    retained: list[Cell] = []
    empties: list[tuple[Box, str, Interval]] = []

    def recurse(cell: Cell, level: int):
        box = Grid(region, level, False).cell_box(cell)
        cert = problem.empty_certificate(box)
        if cert is not None:
            empties.append((box, cert[0], cert[1]))
            return
        if level == max_depth:
            retained.append(cell)
            return
        i, j = cell
        for child in ((2 * i, 2 * j), (2 * i + 1, 2 * j), (2 * i, 2 * j + 1), (2 * i + 1, 2 * j + 1)):
            recurse(child, level + 1)

    recurse((0, 0), 0)
    return retained, empties


def _components(grid: Grid, cells: list[Cell]) -> list[list[Cell]]:
    members = set(cells)
    seen: set[Cell] = set()
    comps: list[list[Cell]] = []
    for start in sorted(cells):
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            c = stack.pop()
            comp.append(c)
            for nb in grid.neighbors8(c):
                if nb in members and nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        comps.append(sorted(comp))
    comps.sort(key=lambda comp: comp[0])
    return comps


_LEFT = {"E": "N", "N": "W", "W": "S", "S": "E"}
_RIGHT = {"E": "S", "S": "W", "W": "N", "N": "E"}


def _boundary_loops(grid: Grid, comp: list[Cell]) -> tuple[BoundaryLoop, ...]:
    """Oriented boundary of the cell union, interior on the left."""
    members = set(comp)

    def is_member(cell: Cell) -> bool:
        c = grid.wrap(cell)
        if not grid.torus and not (0 <= c[0] < grid.n and 0 <= c[1] < grid.n):
            return False
        return c in members

    # directed edges: (wrapped from-vertex, wrapped to-vertex, direction, segment)
    edges = []
    for (i, j) in sorted(comp):
        if not is_member((i, j - 1)):  # south side, heading east
            edges.append(((i, j), (i + 1, j), "E", _edge_segment(grid, i, j, i + 1, j)))
        if not is_member((i + 1, j)):  # east side, heading north
            edges.append(((i + 1, j), (i + 1, j + 1), "N", _edge_segment(grid, i + 1, j, i + 1, j + 1)))
        if not is_member((i, j + 1)):  # north side, heading west
            edges.append(((i + 1, j + 1), (i, j + 1), "W", _edge_segment(grid, i + 1, j + 1, i, j + 1)))
        if not is_member((i - 1, j)):  # west side, heading south
            edges.append(((i, j + 1), (i, j), "S", _edge_segment(grid, i, j + 1, i, j)))

    def wrap_vertex(v):
        if grid.torus:
            return (v[0] % grid.n, v[1] % grid.n)
        return v

    by_from: dict[tuple[int, int], list[int]] = {}
    for idx, e in enumerate(edges):
        by_from.setdefault(wrap_vertex(e[0]), []).append(idx)

    used = [False] * len(edges)
    loops: list[BoundaryLoop] = []
    for start_idx in range(len(edges)):
        if used[start_idx]:
            continue
        chain = [start_idx]
        used[start_idx] = True
        start_v = wrap_vertex(edges[start_idx][0])
        cur = edges[start_idx]
        while wrap_vertex(cur[1]) != start_v:
            v = wrap_vertex(cur[1])
            candidates = [k for k in by_from.get(v, ()) if not used[k]]
            if not candidates:
                raise AssertionError("open boundary chain: inconsistent cell union")
            # prefer left turn, then straight, then right turn
            pref = (_LEFT[cur[2]], cur[2], _RIGHT[cur[2]])
            candidates.sort(key=lambda k: pref.index(edges[k][2]))
            nxt = candidates[0]
            used[nxt] = True
            chain.append(nxt)
            cur = edges[nxt]
        loops.append(BoundaryLoop(tuple(edges[k][3] for k in chain)))
    return tuple(loops)


def _edge_segment(grid: Grid, i0: int, j0: int, i1: int, j1: int) -> Segment:
    p0 = grid.vertex_point(i0, j0)
    p1 = grid.vertex_point(i1, j1)
    return Segment(p0[0], p0[1], p1[0], p1[1])


# ---------------------------------------------------------------------------
# boundary certification


def _certify_segment(problem, seg: Segment, max_refine: int):
    """Refine a segment until every piece carries an emptiness certificate.
    Returns (list of certified pieces, offending segment or None)."""
    pieces: list[tuple[Segment, str]] = []
    stack: list[tuple[Segment, int]] = [(seg, 0)]
    while stack:
        s, level = stack.pop()
        cert = problem.empty_certificate(s.box())
        if cert is not None:
            pieces.append((s, cert[0]))
            continue
        if level >= max_refine:
            return pieces, s
        a, b = s.halves()
        stack.append((b, level + 1))
        stack.append((a, level + 1))
    return pieces, None


def certify_boundary(problem, boundary: Sequence[BoundaryLoop], max_refine: int = 30) -> CertifyResult:
    per_segment = []
    total = 0
    for loop in boundary:
        for seg in loop.segments:
            pieces, offending = _certify_segment(problem, seg, max_refine)
            if offending is not None:
                return CertifyResult(False, total, offending, tuple(per_segment))
            per_segment.append((seg, len(pieces)))
            total += len(pieces)
    return CertifyResult(True, total, None, tuple(per_segment))


def certify_isolating(field: VectorField, block: ZeroBlock, max_refine: int = 30) -> CertifyResult:
    """Certify that the field is nonvanishing on every boundary segment of
    the block, refining segments as needed.  True means the open cell-union
    interior is an isolating neighborhood for (field, its zeros inside)."""
    return certify_boundary(FieldZeros(field), block.boundary, max_refine)


# ---------------------------------------------------------------------------
# block construction


def _build_blocks(problem, region: Box, max_depth: int, max_refine: int) -> IsolationResult:
    torus = problem.domain == "torus"
    if torus and (region.x.lo != 0 or region.x.hi != 1 or region.y.lo != 0 or region.y.hi != 1):
        raise ValueError("torus isolation runs on the fundamental square [0,1]^2")
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    retained, empties = _subdivide(problem, region, max_depth)
    grid = Grid(region, max_depth, torus)
    blocks = []
    for k, comp in enumerate(_components(grid, retained)):
        boundary = _boundary_loops(grid, comp)
        cert = certify_boundary(problem, boundary, max_refine)
        blocks.append(
            ZeroBlock(
                label=f"K{k}",
                domain=problem.domain,
                region=region,
                resolution=max_depth,
                cells=tuple(comp),
                boxes=tuple(grid.cell_box(c) for c in comp),
                boundary=boundary,
                coarse=not cert.ok,
                certificate=cert.per_segment if cert.ok else None,
            )
        )
    return IsolationResult(tuple(blocks), tuple(empties), region, max_depth)


def isolate_zeros(field: VectorField, region: Box, max_depth: int, max_refine: int = 30) -> IsolationResult:
    """Locate Z(field) inside the region as certified blocks.

    Every zero in the region lies in some block's box union; every
    discarded box carries an enclosure certificate that the field does not
    vanish on it.  Blocks whose boundary cannot be certified within the
    refinement limit are flagged coarse.
    """
    if field.is_zero:
        raise ValueError("the zero field vanishes everywhere; nothing to isolate")
    return _build_blocks(FieldZeros(field), region, max_depth, max_refine)


def scalar_zero_blocks(expr: Expr, region: Box, max_depth: int, max_refine: int = 30) -> list[ZeroBlock]:
    """Certified blocks of the scalar zero set {expr = 0} in the region."""
    if expr.is_zero:
        raise ValueError("the zero expression vanishes everywhere")
    return list(_build_blocks(ScalarZeros(expr), region, max_depth, max_refine).blocks)


def common_zero_blocks(fields: Sequence[VectorField], region: Box, max_depth: int, max_refine: int = 30) -> IsolationResult:
    """Blocks of the simultaneous zero set of all given fields."""
    return _build_blocks(CommonZeros(fields), region, max_depth, max_refine)


def dilate_block(field: VectorField, block: ZeroBlock, extra_refine: int = 6) -> ZeroBlock:
    """Grow the block by one layer of cells, each certified nonvanishing.

    The enlarged cell union is a strictly larger isolating neighborhood for
    the same zeros, which is what index independence tests exercise.
    """
    grid = block.grid()
    members = set(block.cells)
    layer: set[Cell] = set()
    for (i, j) in block.cells:
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                if di == 0 and dj == 0:
                    continue
                nb = grid.wrap((i + di, j + dj))
                if not grid.torus and not (0 <= nb[0] < grid.n and 0 <= nb[1] < grid.n):
                    raise CertificationError(
                        "dilation layer would leave the region; enlarge the region first"
                    )
                if nb not in members:
                    layer.add(nb)
    problem = FieldZeros(field)
    for c in sorted(layer):
        if not _box_certified_empty(problem, grid.cell_box(c), extra_refine):
            raise CertificationError(
                f"dilation layer cell {c} could not be certified nonvanishing"
            )
    comp = sorted(members | layer)
    boundary = _boundary_loops(grid, comp)
    cert = certify_boundary(problem, boundary)
    if not cert.ok:
        raise CertificationError("dilated boundary could not be certified")
    return ZeroBlock(
        label=block.label + "+",
        domain=block.domain,
        region=block.region,
        resolution=block.resolution,
        cells=tuple(comp),
        boxes=tuple(grid.cell_box(c) for c in comp),
        boundary=boundary,
        coarse=False,
        certificate=cert.per_segment,
    )


def _box_certified_empty(problem, box: Box, max_depth: int) -> bool:
    if problem.empty_certificate(box) is not None:
        return True
    if max_depth == 0:
        return False
    return all(_box_certified_empty(problem, sub, max_depth - 1) for sub in box.split4())


def block_from_boxes(domain: str, boxes: Sequence[Box], label: str = "user") -> ZeroBlock:
    """Assemble a ZeroBlock from congruent grid-aligned boxes.

    Supports hand-built isolating neighborhoods in tests and the CLI; the
    boxes must all share the same widths and sit on the lattice generated
    by the first box.  Plane only: wrap-around adjacency cannot be inferred
    from a bare box list.
    """
    if domain == "torus":
        raise ValueError("user-assembled blocks are supported on the plane only")
    if not boxes:
        raise ValueError("no boxes")
    wx, wy = boxes[0].widths()
    x0 = min(b.x.lo for b in boxes)
    y0 = min(b.y.lo for b in boxes)
    cells = []
    for b in boxes:
        bx, by = b.widths()
        if (bx, by) != (wx, wy):
            raise ValueError("boxes must be congruent")
        ci = (b.x.lo - x0) / wx
        cj = (b.y.lo - y0) / wy
        if ci.denominator != 1 or cj.denominator != 1:
            raise ValueError("boxes must be grid aligned")
        cells.append((int(ci), int(cj)))
    span = max(max(i for i, _ in cells), max(j for _, j in cells)) + 1
    depth = max(1, (span - 1).bit_length())
    n = 1 << depth
    region = Box(Interval(x0, x0 + n * wx), Interval(y0, y0 + n * wy))
    grid = Grid(region, depth, torus=False)
    comp = sorted(set(cells))
    boundary = _boundary_loops(grid, comp)
    return ZeroBlock(
        label=label,
        domain=domain,
        region=region,
        resolution=depth,
        cells=tuple(comp),
        boxes=tuple(grid.cell_box(c) for c in comp),
        boundary=boundary,
        coarse=False,
        certificate=None,
    )
