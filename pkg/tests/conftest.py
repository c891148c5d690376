from fractions import Fraction

import pytest
from hypothesis import strategies as st

from vfzero import Box, Expr, Interval, VectorField, builtin_catalog

# shared hypothesis strategies


def plane_polys(max_deg: int = 3, coeff: int = 4):
    keys = [
        (0, ex, ey, 0, 0, 0, 0)
        for ex in range(max_deg + 1)
        for ey in range(max_deg + 1 - ex)
    ]
    return st.lists(
        st.tuples(st.sampled_from(keys), st.integers(-coeff, coeff)),
        max_size=6,
    ).map(lambda items: Expr("plane", {k: Fraction(c) for k, c in items}))


def torus_polys(max_deg: int = 2, coeff: int = 3):
    keys = [
        (0, 0, 0, s1, c1, s2, c2)
        for s1 in range(max_deg + 1)
        for c1 in (0, 1)
        for s2 in range(max_deg + 1)
        for c2 in (0, 1)
        if s1 + c1 + s2 + c2 <= max_deg
    ]
    return st.lists(
        st.tuples(st.sampled_from(keys), st.integers(-coeff, coeff)),
        max_size=5,
    ).map(lambda items: Expr("torus", {k: Fraction(c) for k, c in items}))


def plane_fields(max_deg: int = 3, coeff: int = 4):
    return st.tuples(plane_polys(max_deg, coeff), plane_polys(max_deg, coeff)).map(
        lambda t: VectorField(*t)
    )


def rationals(lo: int = -2, hi: int = 2, den: int = 16):
    return st.fractions(min_value=lo, max_value=hi, max_denominator=den)


@st.composite
def boxes(draw, lo: int = -2, hi: int = 2):
    a = draw(rationals(lo, hi))
    b = draw(rationals(lo, hi))
    c = draw(rationals(lo, hi))
    d = draw(rationals(lo, hi))
    x0, x1 = sorted((a, b))
    y0, y1 = sorted((c, d))
    if x0 == x1:
        x1 = x0 + 1
    if y0 == y1:
        y1 = y0 + 1
    return Box(Interval(x0, x1), Interval(y0, y1))


@pytest.fixture(scope="session")
def catalog():
    return {e.name: e for e in builtin_catalog()}
