"""Theorem harnesses over a catalog of field instances.

Each harness exercises one checked statement on concrete data:

* invariance of zero sets and dependency sets under tracking flows,
* index stability under certified-magnitude perturbations,
* vanishing index sum on the torus,
* the common-zero conclusion for essential blocks and their trackers.

Harnesses return reports instead of raising on falsification, so callers
(CLI, acceptance suite) decide how loud a counterexample should be.  The
catalog itself is plain data; new instances and attempted counterexamples
go into the catalog file, not into code.
"""

from __future__ import annotations

import configparser
import random
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Optional, Sequence

from .blocks import ZeroBlock, isolate_zeros
from .errors import CertificationError, SeedRefinementError
from .expr import Expr
from .fields import VectorField, jacobian, parse_field
from .flows import flow_integrate
from .intervals import Box, Interval
from .tracking import (
    POLY_TRACKING,
    LieAlgebraSpec,
    TrackReport,
    common_zeros,
    dep_set,
    track_check,
)
from .winding import block_index

# ---------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    domain: str
    field: VectorField
    trackers: tuple[VectorField, ...]
    region: Box
    expected_blocks: Optional[int]
    expected_indices: Optional[tuple[int, ...]]
    provenance: str
    tags: frozenset[str]
    notes: str = ""

    def has_tag(self, tag: str) -> bool:
        return tag in self.tags


def _parse_region(text: str) -> Box:
    parts = [Fraction(p.strip()) for p in text.split(",")]
    if len(parts) != 4:
        raise ValueError(f"region needs 4 comma-separated rationals, got {text!r}")
    x0, y0, x1, y1 = parts
    return Box(Interval(x0, x1), Interval(y0, y1))


def _split_fields(text: str) -> list[str]:
    out = []
    depth = 0
    cur = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == ";" and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    tail = "".join(cur).strip()
    if tail:
        out.append(tail)
    return out


def load_catalog(text: str) -> list[CatalogEntry]:
    """Parse catalog entries from the INI-style catalog format."""
    cp = configparser.ConfigParser()
    cp.read_string(text)
    entries = []
    for name in cp.sections():
        sec = cp[name]
        domain = sec.get("domain", "plane").strip()
        field = parse_field(sec["x"], domain)
        trackers = tuple(
            parse_field(t.strip(), domain) for t in _split_fields(sec.get("trackers", ""))
        )
        region = _parse_region(sec["region"])
        eb = sec.get("expected_blocks")
        ei = sec.get("expected_indices")
        entries.append(
            CatalogEntry(
                name=name,
                domain=domain,
                field=field,
                trackers=trackers,
                region=region,
                expected_blocks=int(eb) if eb else None,
                expected_indices=tuple(int(v) for v in ei.split(",")) if ei else None,
                provenance=sec.get("provenance", ""),
                tags=frozenset(t.strip() for t in sec.get("tags", "").split(",") if t.strip()),
                notes=sec.get("notes", ""),
            )
        )
    return entries


def builtin_catalog() -> list[CatalogEntry]:
    text = resources.files("vfzero").joinpath("data/catalog.cfg").read_text()
    return load_catalog(text)


# ---------------------------------------------------------------------------
# seed refinement (float Gauss-Newton onto the zero set)


def refine_seed(
    field: VectorField,
    p0: tuple[float, float],
    tol: float = 1e-11,
    max_iter: int = 80,
) -> tuple[float, float]:
    """Polish a point onto Z(field) by damped Gauss-Newton on |F|^2.

    Works for zero manifolds as well as isolated zeros (the normal
    equations are regularized, so rank-deficient Jacobians descend to the
    nearest zero curve instead of diverging).
    """
    jac = jacobian(field)
    x, y = float(p0[0]), float(p0[1])
    for _ in range(max_iter):
        fx, fy = field.eval_float(x, y)
        if max(abs(fx), abs(fy)) < tol:
            return (x, y)
        a = jac.dxx.eval_float(x, y)
        b = jac.dxy.eval_float(x, y)
        c = jac.dyx.eval_float(x, y)
        d = jac.dyy.eval_float(x, y)
        # normal equations J^T J s = -J^T F with Levenberg damping
        g1 = a * fx + c * fy
        g2 = b * fx + d * fy
        m11 = a * a + c * c
        m12 = a * b + c * d
        m22 = b * b + d * d
        lam = 1e-12 + 1e-8 * (m11 + m22)
        det = (m11 + lam) * (m22 + lam) - m12 * m12
        if det == 0:
            raise SeedRefinementError(f"singular refinement system at ({x:.6g}, {y:.6g})")
        sx = (-(g1) * (m22 + lam) + g2 * m12) / det
        sy = (-(g2) * (m11 + lam) + g1 * m12) / det
        x, y = x + sx, y + sy
    fx, fy = field.eval_float(x, y)
    if max(abs(fx), abs(fy)) < tol:
        return (x, y)
    raise SeedRefinementError(
        f"seed refinement stalled at ({x:.6g}, {y:.6g}), residual {max(abs(fx), abs(fy)):.3g}"
    )


def _block_seeds(field: VectorField, block: ZeroBlock, per_block: int) -> list[tuple[float, float]]:
    cells = block.cells
    take = [cells[(len(cells) * k) // per_block] for k in range(min(per_block, len(cells)))]
    grid = block.grid()
    seeds = []
    for cell in dict.fromkeys(take):
        cx, cy = grid.cell_box(cell).midpoint()
        seeds.append(refine_seed(field, (float(cx), float(cy))))
    return seeds


# ---------------------------------------------------------------------------
# invariance harness


@dataclass(frozen=True)
class InvarianceReport:
    target: str
    tracker_status: str
    seeds: tuple[tuple[float, float], ...]
    max_residual: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.max_residual < self.tol


def invariance_test(
    x_field: VectorField,
    y_field: VectorField,
    region: Box,
    target: str = "zeros",
    tol: float = 1e-6,
    h: float = 1e-3,
    t_span: float = 1.0,
    max_depth: int = 8,
    seeds_per_block: int = 4,
) -> InvarianceReport:
    """Flow seeds on Z(X) (or on the dependency set) along the Y-flow for
    t in [-t_span, t_span] and measure how far the flowed points drift off
    the invariant set.

    The residual scales with integrator error and seed polish, not with
    the invariance statement itself, which is exact.
    """
    rep = track_check(y_field, x_field)
    if not rep.tracking:
        raise ValueError("precondition failed: Y does not track X")
    if target == "zeros":
        blocks = isolate_zeros(x_field, region, max_depth).blocks
        residual_expr = None
    elif target == "dependency":
        ds = dep_set(x_field, y_field, region, max_depth)
        if ds.identically_dependent:
            return InvarianceReport(target, rep.status, (), 0.0, tol)
        blocks = ds.blocks
        residual_expr = ds.wedge
    else:
        raise ValueError("target must be 'zeros' or 'dependency'")

    def residual(px: float, py: float) -> float:
        if residual_expr is not None:
            return abs(residual_expr.eval_float(px, py))
        fx, fy = x_field.eval_float(px, py)
        return max(abs(fx), abs(fy))

    seed_source = x_field if residual_expr is None else _scalar_gradient_field(residual_expr)
    seeds: list[tuple[float, float]] = []
    for blk in blocks:
        seeds.extend(_block_seeds(seed_source, blk, seeds_per_block))
    worst = 0.0
    for seed in seeds:
        for f in (y_field, -y_field):
            traj = flow_integrate(f, seed, t_span, h)
            for px, py in traj.points:
                worst = max(worst, residual(px, py))
    return InvarianceReport(target, rep.status, tuple(seeds), worst, tol)


def _scalar_gradient_field(e: Expr) -> VectorField:
    # refine seeds of a scalar zero set by flowing against grad(e)*e; the
    # Gauss-Newton polish only needs a field vanishing exactly on {e = 0}
    return VectorField(e, Expr.zero(e.domain))


# ---------------------------------------------------------------------------
# stability harness


@dataclass(frozen=True)
class StabilityReport:
    block: str
    base_index: int
    trials: int
    indices_unchanged: bool
    epsilon_min: Fraction
    epsilon_max: Fraction
    failures: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.indices_unchanged


def _boundary_pieces(field: VectorField, block: ZeroBlock):
    """Refine the block boundary until the field enclosure on every piece
    excludes the origin; returns the pieces with their enclosures."""
    from .blocks import Segment

    pieces: list[tuple[Segment, Interval, Interval]] = []
    stack: list[tuple[Segment, int]] = []
    for loop in block.boundary:
        for seg in loop.segments:
            stack.append((seg, 0))
    while stack:
        seg, level = stack.pop()
        if level > 42:
            raise CertificationError("field magnitude bound not certifiable on boundary")
        box = seg.box()
        rx = field.cx.range_on(box)
        ry = field.cy.range_on(box)
        if rx.excludes_zero() or ry.excludes_zero():
            pieces.append((seg, rx, ry))
            continue
        a, b = seg.halves()
        stack.append((a, level + 1))
        stack.append((b, level + 1))
    return pieces


_PLANE_PERTURBATION_KEYS = [
    (0, ex, ey, 0, 0, 0, 0) for ex in range(4) for ey in range(4 - ex)
]
_TORUS_PERTURBATION_KEYS = [
    (0, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 1, 0, 0, 0),
    (0, 0, 0, 0, 1, 0, 0),
    (0, 0, 0, 0, 0, 1, 0),
    (0, 0, 0, 0, 0, 0, 1),
]


def _random_perturbation(domain: str, rng: random.Random) -> VectorField:
    keys = _PLANE_PERTURBATION_KEYS if domain == "plane" else _TORUS_PERTURBATION_KEYS
    comps = []
    for _ in range(2):
        terms = {}
        for key in keys:
            c = rng.randint(-64, 64)
            if c:
                terms[key] = Fraction(c, 64)
        comps.append(Expr(domain, terms))
    return VectorField(comps[0], comps[1])


def stability_test(
    x_field: VectorField,
    block: ZeroBlock,
    trials: int = 100,
    seed: int = 0,
) -> StabilityReport:
    """Perturb the field by random polynomials at a certified-safe scale
    and confirm the block index never moves.

    The scale is eps = m / (2 s) with m a certified lower bound for |X| and
    s an upper bound for |P| on the block boundary (sup norm, piecewise),
    which keeps the straight-line deformation nonsingular there.
    """
    base = block_index(x_field, block).index
    pieces = _boundary_pieces(x_field, block)
    m = min(max(rx.mig(), ry.mig()) for _, rx, ry in pieces)
    if m <= 0:
        raise CertificationError("no positive lower field bound on the boundary")
    rng = random.Random(seed)
    failures = []
    eps_seen: list[Fraction] = []
    for trial in range(trials):
        pert = _random_perturbation(x_field.domain, rng)
        if pert.is_zero:
            eps_seen.append(Fraction(1))
            continue
        s = Fraction(0)
        for segpiece, _, _ in pieces:
            box = segpiece.box()
            px = pert.cx.range_on(box)
            py = pert.cy.range_on(box)
            s = max(s, px.mag(), py.mag())
        eps = Fraction(1) if s == 0 else m / (2 * s)
        eps_seen.append(eps)
        perturbed = x_field + pert.scale(eps)
        if block_index(perturbed, block).index != base:
            failures.append(trial)
    return StabilityReport(
        block=block.label,
        base_index=base,
        trials=trials,
        indices_unchanged=not failures,
        epsilon_min=min(eps_seen) if eps_seen else Fraction(0),
        epsilon_max=max(eps_seen) if eps_seen else Fraction(0),
        failures=tuple(failures),
    )


# ---------------------------------------------------------------------------
# torus index sum


@dataclass(frozen=True)
class PoincareHopfReport:
    indices: tuple[tuple[str, int], ...]
    total: int

    @property
    def ok(self) -> bool:
        return self.total == 0


TORUS_SQUARE = Box(Interval(Fraction(0), Fraction(1)), Interval(Fraction(0), Fraction(1)))


def poincare_hopf_check(field: VectorField, max_depth: int = 6) -> PoincareHopfReport:
    """Sum of block indices over the whole torus; zero for every field with
    certifiable blocks, matching the Euler characteristic of the torus."""
    if field.domain != "torus":
        raise ValueError("poincare_hopf_check runs on torus fields")
    result = isolate_zeros(field, TORUS_SQUARE, max_depth)
    indices = []
    for blk in result.blocks:
        if blk.coarse:
            raise CertificationError(f"coarse block {blk.label}; increase max_depth")
        indices.append((blk.label, block_index(field, blk).index))
    return PoincareHopfReport(tuple(indices), sum(ix for _, ix in indices))


# ---------------------------------------------------------------------------
# common-zero theorem harness


@dataclass(frozen=True)
class Witness:
    tracker: str  # "Y0", "Y1", ... or "common"
    block: str
    box: Box


@dataclass(frozen=True)
class MainTheoremReport:
    entry: str
    tracker_statuses: tuple[str, ...]
    hypotheses_ok: bool
    block_indices: tuple[tuple[str, int], ...]
    essential_blocks: tuple[str, ...]
    witnesses: tuple[Witness, ...]
    missed: tuple[tuple[str, str], ...]  # (tracker, essential block) with no witness
    conclusion_holds: bool

    @property
    def falsified(self) -> bool:
        return self.hypotheses_ok and not self.conclusion_holds


def _overlap_box(a: Box, b: Box) -> Box:
    return Box(
        Interval(max(a.x.lo, b.x.lo), min(a.x.hi, b.x.hi)),
        Interval(max(a.y.lo, b.y.lo), min(a.y.hi, b.y.hi)),
    )


def _cover_witness(blk: ZeroBlock, others: Sequence[ZeroBlock]) -> Optional[Box]:
    for other in others:
        for a in blk.boxes:
            for b in other.boxes:
                if a.intersects(b):
                    return _overlap_box(a, b)
    return None


def main_theorem_check(entry: CatalogEntry, max_depth: int = 8) -> MainTheoremReport:
    """Check the common-zero conclusion on one catalog entry.

    Pipeline: classify every tracker symbolically; isolate Z(X) and find
    the essential (nonzero-index) blocks; isolate every tracker's zero set
    and the common zero set of all trackers; demand that each of those
    covers intersects every essential block's cover, emitting witness
    boxes.  When a tracker fails the tracking hypothesis the conclusion is
    still evaluated and reported (negative controls).
    """
    reports: list[TrackReport] = [track_check(y, entry.field) for y in entry.trackers]
    statuses = tuple(r.status for r in reports)
    hypotheses_ok = bool(reports) and all(r.status == POLY_TRACKING for r in reports)

    isolation = isolate_zeros(entry.field, entry.region, max_depth)
    for blk in isolation.blocks:
        if blk.coarse:
            raise CertificationError(f"coarse block {blk.label} in {entry.name}")
    indices = tuple((blk.label, block_index(entry.field, blk).index) for blk in isolation.blocks)
    essential = tuple(label for label, ix in indices if ix != 0)
    essential_blocks = [blk for blk in isolation.blocks if blk.label in essential]

    witnesses: list[Witness] = []
    missed: list[tuple[str, str]] = []

    def check_cover(tag: str, zero_blocks: Sequence[ZeroBlock]):
        for blk in essential_blocks:
            w = _cover_witness(blk, zero_blocks)
            if w is None:
                missed.append((tag, blk.label))
            else:
                witnesses.append(Witness(tag, blk.label, w))

    for k, y in enumerate(entry.trackers):
        if y.is_zero:
            raise ValueError(f"tracker {k} of {entry.name} is the zero field")
        y_iso = isolate_zeros(y, entry.region, max_depth)
        check_cover(f"Y{k}", y_iso.blocks)
    if entry.trackers:
        algebra = LieAlgebraSpec(entry.name, entry.trackers)
        check_cover("common", common_zeros(algebra, entry.region, max_depth))

    return MainTheoremReport(
        entry=entry.name,
        tracker_statuses=statuses,
        hypotheses_ok=hypotheses_ok,
        block_indices=indices,
        essential_blocks=essential,
        witnesses=tuple(witnesses),
        missed=tuple(missed),
        conclusion_holds=not missed,
    )
