"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; every expected integer here is exact and the randomized suites use
fixed seeds.
"""

import json
import math
import random
import time
from fractions import Fraction

import pytest

from vfzero import (
    Box,
    Expr,
    VectorField,
    block_index,
    bracket_closure_track,
    euler_field,
    index_transfer_check,
    invariance_test,
    isolate_zeros,
    lie_bracket,
    parse_expr,
    parse_field,
    poincare_hopf_check,
    main_theorem_check,
    region_boundary_loop,
    region_index,
    rk4_convergence_ratio,
    stability_test,
    track_check,
    winding_number,
)
from vfzero.cli import run_command

from oracles import dense_circle_winding

REGION = Box.from_corners(-1, -1, 1, 1)
ORIGIN = (Fraction(0), Fraction(0))


def _report(name: str, ok: bool, elapsed: float, budget: float):
    within = elapsed < budget
    status = "PASS" if (ok and within) else "FAIL"
    print(f"[acceptance] {name}: {status} ({elapsed:.2f}s, budget {budget:.0f}s)")
    assert ok, name
    assert within, f"{name} exceeded budget: {elapsed:.2f}s >= {budget}s"


def _origin_block(field, depth=6, region=REGION):
    blocks = isolate_zeros(field, region, depth).blocks
    return next(b for b in blocks if b.contains_point(ORIGIN))


def test_criterion_1_linear_index_law():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    done = 0
    ok = True
    while done < 100:
        a, b, c, d = (rng.randint(-9, 9) for _ in range(4))
        det = a * d - b * c
        if det == 0:
            continue
        field = VectorField(
            parse_expr(f"{a}*x + {b}*y"), parse_expr(f"{c}*x + {d}*y")
        )
        blk = _origin_block(field)
        got = block_index(field, blk).index
        ok = ok and (got == (1 if det > 0 else -1))
        done += 1
    _report("1 linear index law (100 fields)", ok, time.perf_counter() - t0, 5.0)


def _complex_power(k: int, conjugate: bool = False) -> VectorField:
    re, im = parse_expr("1"), parse_expr("0")
    x, y = parse_expr("x"), parse_expr("y")
    for _ in range(k):
        re, im = re * x - im * y, re * y + im * x
    return VectorField(re, -im if conjugate else im)


def test_criterion_2_power_law():
    t0 = time.perf_counter()
    ok = True
    for k in range(1, 6):
        for conj in (False, True):
            field = _complex_power(k, conj)
            expected = -k if conj else k
            certified = block_index(field, _origin_block(field)).index
            oracle = dense_circle_winding(field, radius=0.8, samples=100_000)
            ok = ok and certified == oracle == expected
    _report("2 power law k=1..5 vs dense oracle", ok, time.perf_counter() - t0, 10.0)


def test_criterion_3_additivity(catalog):
    t0 = time.perf_counter()
    entries = [e for e in catalog.values() if e.has_tag("additivity")]
    assert len(entries) >= 3
    ok = True
    for e in entries:
        boundary = winding_number(e.field, region_boundary_loop(e.region))
        blocks = isolate_zeros(e.field, e.region, 7).blocks
        total = sum(block_index(e.field, b).index for b in blocks)
        ok = ok and total == boundary == region_index(e.field, e.region, 7)
    _report(f"3 additivity on {len(entries)} multi-zero fields", ok,
            time.perf_counter() - t0, 10.0)


def test_criterion_4_poincare_hopf_torus(catalog):
    t0 = time.perf_counter()
    entries = [e for e in catalog.values() if e.has_tag("ph")]
    assert len(entries) >= 5
    ok = True
    for e in entries:
        rep = poincare_hopf_check(e.field, 5)
        ok = ok and rep.total == 0 and [ix for _, ix in rep.indices] == list(e.expected_indices)
    _report(f"4 torus index sums on {len(entries)} fields", ok,
            time.perf_counter() - t0, 30.0)


def test_criterion_5_stability(catalog):
    t0 = time.perf_counter()
    entries = [e for e in catalog.values() if e.has_tag("stability")]
    ok = True
    for e in entries:
        depth = 5 if e.domain == "torus" else 6
        blk = isolate_zeros(e.field, e.region, depth).blocks[0]
        rep = stability_test(e.field, blk, trials=100, seed=1729)
        ok = ok and rep.ok
    _report(f"5 stability: 100 trials x {len(entries)} fields", ok,
            time.perf_counter() - t0, 60.0)


def test_criterion_6_index_transfer(catalog):
    t0 = time.perf_counter()
    instances = 0
    ok = True
    single_zero = [
        "linear-node", "linear-saddle", "rotation-node", "complex-squaring",
        "complex-cubing", "conjugate-squaring", "odd-cube",
    ]
    for name in single_zero:
        e = catalog[name]
        blk = _origin_block(e.field, 6, e.region)
        pos = e.field.scale(parse_expr("2 + x^2"))
        rep = index_transfer_check(e.field, pos, blk, "no-negative-ratio")
        ok = ok and rep.certified and rep.index_x == rep.index_y
        instances += 1
        rep = index_transfer_check(e.field, -e.field, blk, "no-positive-ratio")
        ok = ok and rep.certified and rep.index_x == rep.index_y
        instances += 1
    # independent fields with positive wedge on the boundary
    e = catalog["linear-node"]
    blk = _origin_block(e.field, 6, e.region)
    rep = index_transfer_check(e.field, parse_field("(-y, x)"), blk, "no-negative-ratio")
    ok = ok and rep.certified and rep.index_x == rep.index_y
    instances += 1
    # torus instance: scaled versus unscaled grid node
    t_base = catalog["torus-grid-node"].field
    t_scaled = catalog["torus-scaled-node"].field
    tblk = isolate_zeros(t_base, catalog["torus-grid-node"].region, 5).blocks[0]
    rep = index_transfer_check(t_scaled, t_base, tblk, "no-negative-ratio")
    ok = ok and rep.certified and rep.index_x == rep.index_y
    instances += 1
    assert instances >= 10
    _report(f"6 index transfer on {instances} certified instances", ok,
            time.perf_counter() - t0, 60.0)


def test_criterion_7_tracking_algebra():
    t0 = time.perf_counter()
    e = euler_field()
    ok = True
    # Euler identity, exact, k = 1..6
    for k in range(1, 7):
        x = VectorField(parse_expr(f"x^{k}"), parse_expr(f"y^{k}"))
        ok = ok and lie_bracket(e, x) == x.scale(Fraction(k - 1))
        zk = _complex_power(k)
        ok = ok and lie_bracket(e, zk) == zk.scale(Fraction(k - 1))
    # multiple-of-X law on 100 random polynomials
    rng = random.Random(31)
    squaring = parse_field("(x^2 - y^2, 2*x*y)")

    def random_poly(deg, coeff=3):
        terms = {}
        for _ in range(4):
            key = (0, rng.randint(0, deg), rng.randint(0, deg), 0, 0, 0, 0)
            if sum(key[1:3]) > deg:
                continue
            terms[key] = terms.get(key, Fraction(0)) + rng.randint(-coeff, coeff)
        return Expr("plane", {k2: v for k2, v in terms.items() if v})

    for _ in range(100):
        p = random_poly(2)
        lhs = lie_bracket(squaring.scale(p), squaring)
        xp = squaring.cx * p.derive("x") + squaring.cy * p.derive("y")
        ok = ok and lhs == squaring.scale(-xp)
    # Jacobi identity on 100 random degree-<=3 triples
    def random_field():
        return VectorField(random_poly(3, 2), random_poly(3, 2))

    for _ in range(100):
        fx, fy, fz = random_field(), random_field(), random_field()
        j = (
            lie_bracket(fx, lie_bracket(fy, fz))
            + lie_bracket(fy, lie_bracket(fz, fx))
            + lie_bracket(fz, lie_bracket(fx, fy))
        )
        ok = ok and j.is_zero
    # bracket closure on 100 generated tracker pairs (scalar multiples plus
    # radial components always track, so every generated pair counts)
    closed = 0
    for _ in range(100):
        y = squaring.scale(random_poly(2)) + e.scale(Fraction(rng.randint(-2, 2)))
        z = squaring.scale(random_poly(2))
        assert track_check(y, squaring).tracking and track_check(z, squaring).tracking
        rep = bracket_closure_track(y, z, squaring)
        ok = ok and rep.tracking
        closed += 1
    ok = ok and closed == 100
    _report("7 tracking algebra (Euler, p*X, Jacobi, closure)", ok,
            time.perf_counter() - t0, 30.0)


def test_criterion_8_invariance(catalog):
    t0 = time.perf_counter()
    pairs = [e for e in catalog.values() if e.has_tag("invariance")]
    assert len(pairs) >= 3
    ok = True
    for e in pairs:
        rep = invariance_test(e.field, e.trackers[0], e.region, tol=1e-6, h=1e-3)
        ok = ok and rep.max_residual < 1e-6
    ratio = rk4_convergence_ratio(parse_field("(-y, x)"), (1.0, 0.0),
                                  math.pi / 2, 0.05, (0.0, 1.0))
    ok = ok and 8.0 < ratio < 32.0
    _report(f"8 invariance on {len(pairs)} pairs + RK4 order {ratio:.1f}", ok,
            time.perf_counter() - t0, 60.0)


def test_criterion_9_main_theorem(catalog):
    t0 = time.perf_counter()
    entries = [e for e in catalog.values() if e.has_tag("main")]
    assert len(entries) >= 10
    ok = True
    for e in entries:
        rep = main_theorem_check(e, 10)
        ok = ok and rep.hypotheses_ok and rep.conclusion_holds and not rep.falsified
    neg = main_theorem_check(catalog["negative-control-shift"], 10)
    ok = ok and (not neg.hypotheses_ok) and (not neg.conclusion_holds) and neg.missed
    _report(f"9 common-zero theorem on {len(entries)} entries + negative control",
            bool(ok), time.perf_counter() - t0, 120.0)


def test_criterion_10_determinism_exactness(tmp_path):
    t0 = time.perf_counter()
    argv = ["verify", "stability", "--field", "(x^2 - y^2, 2*x*y)",
            "--region", "-1,-1,1,1", "--depth", "5", "--trials", "10", "--seed", "77"]
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert run_command(argv + ["--out", str(out1)]) == 0
    assert run_command(argv + ["--out", str(out2)]) == 0
    ok = out1.read_bytes() == out2.read_bytes()

    out3 = tmp_path / "ix.json"
    assert run_command(["index", "--field", "(x, y)", "--region", "-1,-1,1,1",
                        "--depth", "6", "--out", str(out3)]) == 0
    doc = json.loads(out3.read_text())
    blk = doc["results"]["blocks"][0]
    ok = ok and isinstance(blk["index"], int)
    ok = ok and all(isinstance(blk["hull"][k], str) for k in ("x0", "y0", "x1", "y1"))
    ok = ok and blk["hull"]["x1"] == "1/32"
    eps = json.loads(out1.read_text())["results"]["reports"][0]["epsilon_min"]
    ok = ok and isinstance(eps, str)  # exact rational, string-encoded
    _report("10 determinism and exact encoding", ok, time.perf_counter() - t0, 30.0)
