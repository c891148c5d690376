import random
from fractions import Fraction

import pytest

from vfzero import (
    Box,
    CertificationError,
    FalsificationError,
    block_from_boxes,
    block_index,
    dilate_block,
    index_transfer_check,
    isolate_zeros,
    parse_expr,
    parse_field,
    region_boundary_loop,
    region_index,
    scalar_factor_index_check,
    winding_number,
)

from oracles import dense_block_winding, dense_circle_winding, dense_loop_winding

REGION = Box.from_corners(-1, -1, 1, 1)
REGION2 = Box.from_corners(-2, -2, 2, 2)


def origin_block(field_text, depth=6, region=REGION):
    """The certified block containing the origin (extra index-0 clusters can
    appear at coarse depth when component zero bands nearly overlap)."""
    field = parse_field(field_text)
    res = isolate_zeros(field, region, depth)
    zero = (Fraction(0), Fraction(0))
    blk = next(b for b in res.blocks if b.contains_point(zero))
    return field, blk


class TestWindingNumber:
    def test_identity_direction_map(self):
        field = parse_field("(x, y)")
        assert winding_number(field, region_boundary_loop(REGION)) == 1

    def test_saddle_against_oracle(self):
        field = parse_field("(x, -y)")
        loop = region_boundary_loop(REGION)
        certified = winding_number(field, loop)
        assert certified == dense_loop_winding(field, loop, 100_000) == -1

    def test_squaring_against_oracle(self):
        field = parse_field("(x^2 - y^2, 2*x*y)")
        loop = region_boundary_loop(REGION)
        certified = winding_number(field, loop)
        assert certified == dense_loop_winding(field, loop, 100_000) == 2

    def test_zero_on_loop_rejected(self):
        field = parse_field("(x, y)")
        loop = region_boundary_loop(Box.from_corners(0, 0, 1, 1))
        with pytest.raises(CertificationError):
            winding_number(field, loop)


class TestBlockIndex:
    def test_node(self):
        field, blk = origin_block("(x, y)")
        assert block_index(field, blk).index == 1

    def test_squaring_block(self):
        field, blk = origin_block("(x^2 - y^2, 2*x*y)")
        rep = block_index(field, blk)
        assert rep.index == 2
        assert rep.index == dense_block_winding(field, blk)

    def test_annulus_block_outer_minus_inner(self):
        field = parse_field("((x^2 + y^2 - 1)*x, (x^2 + y^2 - 1)*y)")
        blocks = isolate_zeros(field, REGION2, 6).blocks
        ring = next(b for b in blocks if len(b.boundary) == 2)
        rep = block_index(field, ring)
        assert rep.index == 0
        loops = sorted(lw.winding for lw in rep.loops)
        assert loops == [-1, 1]  # interior-left: outer +1, hole loop -1
        assert dense_block_winding(field, ring) == 0

    def test_angle_sum_encloses_index(self):
        from vfzero.intervals import TWO_PI

        field, blk = origin_block("(x^2 - y^2, 2*x*y)")
        rep = block_index(field, blk)
        s = rep.angle_sum
        assert s.lo <= (TWO_PI * rep.index).hi and (TWO_PI * rep.index).lo <= s.hi

    def test_linear_field_law_sample(self):
        rng = random.Random(99)
        zero = (Fraction(0), Fraction(0))
        for _ in range(20):
            a, b, c, d = (rng.randint(-9, 9) for _ in range(4))
            det = a * d - b * c
            if det == 0:
                continue
            field = parse_field(f"({a}*x + {b}*y, {c}*x + {d}*y)")
            blocks = isolate_zeros(field, REGION, 6).blocks
            blk = next(b2 for b2 in blocks if b2.contains_point(zero))
            expected = 1 if det > 0 else -1
            assert block_index(field, blk).index == expected

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_power_law_sample(self, k):
        zero = (Fraction(0), Fraction(0))
        zk = _complex_power_field(k)
        ck = _complex_power_field(k, conjugate=True)
        for field, expected in ((zk, k), (ck, -k)):
            blocks = isolate_zeros(field, REGION, 6).blocks
            blk = next(b for b in blocks if b.contains_point(zero))
            assert block_index(field, blk).index == expected
            assert dense_circle_winding(field, radius=0.8) == expected

    def test_isolating_neighborhood_independence(self):
        field, blk = origin_block("(x^2 - y^2, 2*x*y)")
        grown = dilate_block(field, blk)
        assert block_index(field, grown).index == block_index(field, blk).index

    def test_torus_circle_blocks_have_index_zero(self):
        # zero set of (sin(2*pi*x), 0) is two non-contractible circles; the
        # boundary loops wrap around the torus and carry winding 0
        field = parse_field("(sin2px, 0)", "torus")
        blocks = isolate_zeros(field, Box.from_corners(0, 0, 1, 1), 5).blocks
        assert len(blocks) == 2
        for blk in blocks:
            assert not blk.coarse
            assert len(blk.boundary) == 2
            assert block_index(field, blk).index == 0


def _complex_power_field(k: int, conjugate: bool = False):
    # real and imaginary parts of z^k (or conj(z)^k) via binomial expansion
    zx = parse_expr("x")
    zy = parse_expr("y")
    re, im = parse_expr("1"), parse_expr("0")
    for _ in range(k):
        re, im = re * zx - im * zy, re * zy + im * zx
    from vfzero import VectorField

    return VectorField(re, -im if conjugate else im)


class TestRegionIndex:
    def test_two_zeros_sum(self):
        field = parse_field("(x*(x - 1) - y^2, y*(2*x - 1))")
        assert region_index(field, REGION2, 7) == 2

    def test_empty_zero_set(self):
        field = parse_field("(x^2 + y^2 + 1, x)")
        assert region_index(field, REGION2, 5) == 0

    def test_saddle(self):
        field = parse_field("(x, -y)")
        assert region_index(field, REGION, 6) == -1


class TestIndexTransfer:
    def test_positive_scalar_factor(self):
        field, blk = origin_block("(x, y)")
        scaled = field.scale(parse_expr("2 + x^2"))
        rep = index_transfer_check(field, scaled, blk, "no-negative-ratio")
        assert rep.certified and rep.index_x == rep.index_y == 1

    def test_antipodal_needs_mode_b(self):
        field, blk = origin_block("(x, y)")
        minus = -field
        rep_a = index_transfer_check(field, minus, blk, "no-negative-ratio")
        assert not rep_a.certified
        rep_b = index_transfer_check(field, minus, blk, "no-positive-ratio")
        assert rep_b.certified and rep_b.index_x == rep_b.index_y == 1

    def test_rotated_frame_mode_a(self):
        field, blk = origin_block("(x, y)")
        rot = parse_field("(-y, x)")
        rep = index_transfer_check(field, rot, blk, "no-negative-ratio")
        assert rep.certified and rep.index_x == rep.index_y == 1

    def test_transfer_soundness_sample(self):
        cases = [
            ("(x, -y)", "((1 + y^2)*x, (-1 - y^2)*y)", "no-negative-ratio"),
            ("(x^2 - y^2, 2*x*y)", "(3*x^2 - 3*y^2, 6*x*y)", "no-negative-ratio"),
            ("(-y, x)", "(y, -x)", "no-positive-ratio"),
        ]
        for xt, yt, mode in cases:
            field, blk = origin_block(xt)
            rep = index_transfer_check(field, parse_field(yt), blk, mode)
            assert rep.certified
            assert rep.index_x == rep.index_y


class TestScalarFactorIndex:
    def test_two_opposite_zeros_cancel(self):
        field = parse_field("(x^2 - 1, y)")
        row = [
            Box.from_corners(Fraction(-3, 2) + Fraction(k, 2), Fraction(-1, 4),
                             Fraction(-1, 1) + Fraction(k, 2), Fraction(1, 4))
            for k in range(6)
        ]
        blk = block_from_boxes("plane", row)
        rep = scalar_factor_index_check(field, parse_expr("2 + x^2"), blk)
        assert rep.index_y == 0
        assert rep.index_scaled == 0
        assert rep.implication_holds

    def test_noncompact_zero_line_rejected(self):
        # X = g*Y has the whole line {x = 0} as zeros: no bounded block is
        # isolating, so certification must fail
        y_field = parse_field("(1, y)")
        blk = block_from_boxes(
            "plane", [Box.from_corners(Fraction(-1, 4), Fraction(-1, 4),
                                       Fraction(1, 4), Fraction(1, 4))]
        )
        with pytest.raises(CertificationError):
            scalar_factor_index_check(y_field, parse_expr("x"), blk)

    def test_unit_factor_identity(self):
        field, blk = origin_block("(x, -y)")
        rep = scalar_factor_index_check(field, parse_expr("1"), blk)
        assert rep.index_y == rep.index_scaled == -1
