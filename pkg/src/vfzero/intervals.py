"""Exact rational intervals and boxes.

All interval endpoints are exact ``fractions.Fraction`` values, so every
enclosure computed here is unconditional: no floating-point rounding mode
games are needed.  Transcendental enclosures (pi, sin, cos, atan2) are
delegated to mpmath's interval context at 128-bit working precision; the
dyadic endpoints mpmath returns are lifted back into exact rationals, so
the only approximation is an outward widening of at most one ulp at that
precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from mpmath import iv as _iv
from mpmath.libmp import from_rational, round_ceiling, round_floor

Rational = Fraction
RationalLike = Union[Fraction, int]

_PREC_BITS = 128
_iv.prec = _PREC_BITS


class EnclosureError(ArithmeticError):
    """An enclosure could not be produced (e.g. ambiguous atan2 quadrant)."""


class _RawMpf:
    """Adapter letting a raw libmp value tuple pass through iv.convert."""

    __slots__ = ("_mpf_",)

    def __init__(self, raw):
        self._mpf_ = raw


def _raw_to_fraction(raw) -> Fraction:
    # raw is an mpf value tuple (sign, mantissa, exponent, bitcount);
    # mantissa may arrive as gmpy2.mpz, so coerce to plain int
    sign, man, exp, _ = raw
    f = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -f if sign else f


def _iv_endpoints(x) -> tuple[Fraction, Fraction]:
    lo, hi = x._mpi_
    return _raw_to_fraction(lo), _raw_to_fraction(hi)


def _iv_from_fractions(lo: Fraction, hi: Fraction):
    a = from_rational(lo.numerator, lo.denominator, _PREC_BITS, round_floor)
    b = from_rational(hi.numerator, hi.denominator, _PREC_BITS, round_ceiling)
    return _iv.mpf([_RawMpf(a), _RawMpf(b)])


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not isinstance(self.lo, Fraction):
            object.__setattr__(self, "lo", Fraction(self.lo))
        if not isinstance(self.hi, Fraction):
            object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")

    @staticmethod
    def point(v: RationalLike) -> "Interval":
        v = Fraction(v)
        return Interval(v, v)

    @staticmethod
    def hull(items: Iterable["Interval"]) -> "Interval":
        items = list(items)
        if not items:
            raise ValueError("hull of no intervals")
        return Interval(min(i.lo for i in items), max(i.hi for i in items))

    def __add__(self, other: "Interval") -> "Interval":
        if isinstance(other, Interval):
            return Interval(self.lo + other.lo, self.hi + other.hi)
        return Interval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other) -> "Interval":
        return self + (-other if isinstance(other, Interval) else Interval.point(-other))

    def __mul__(self, other) -> "Interval":
        if not isinstance(other, Interval):
            other = Interval.point(other)
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def int_pow(self, n: int) -> "Interval":
        """Tight enclosure of {t**n : t in self} for integer n >= 0."""
        if n < 0:
            raise ValueError("negative exponent")
        if n == 0:
            return Interval.point(1)
        if n % 2 == 1 or self.lo >= 0:
            return Interval(self.lo**n, self.hi**n)
        if self.hi <= 0:
            return Interval(self.hi**n, self.lo**n)
        # even power over an interval straddling zero
        return Interval(Fraction(0), max(self.lo**n, self.hi**n))

    def contains(self, v: RationalLike) -> bool:
        return self.lo <= v <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def mig(self) -> Fraction:
        """Minimum of |t| over the interval (0 if it contains zero)."""
        if self.contains_zero():
            return Fraction(0)
        return min(abs(self.lo), abs(self.hi))

    def mag(self) -> Fraction:
        """Maximum of |t| over the interval."""
        return max(abs(self.lo), abs(self.hi))

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def _pi_interval() -> Interval:
    lo, hi = _iv_endpoints(+_iv.pi)
    return Interval(lo, hi)


PI: Interval = _pi_interval()
TWO_PI: Interval = PI * 2
HALF_PI: Interval = Interval(PI.lo / 2, PI.hi / 2)

_PI_POWERS: dict[int, Interval] = {0: Interval.point(1), 1: PI}


def pi_power(k: int) -> Interval:
    if k not in _PI_POWERS:
        _PI_POWERS[k] = pi_power(k - 1) * PI
    return _PI_POWERS[k]


@lru_cache(maxsize=1 << 16)
def sin_2pi_range(lo: Fraction, hi: Fraction) -> Interval:
    """Enclosure of {sin(2*pi*t) : t in [lo, hi]}.

    Extrema locations of sin(2*pi*t) are rational (t = 1/4 and 3/4 mod 1),
    so the max/min clipping below is exact; endpoint values come from
    mpmath's interval sine.
    """
    if hi - lo >= 1:
        return Interval(Fraction(-1), Fraction(1))
    arg = 2 * _iv.pi * _iv_from_fractions(lo, hi)
    a, b = _iv_endpoints(_iv.sin(arg))
    out = Interval(max(a, Fraction(-1)), min(b, Fraction(1)))
    # insert exact extrema when a critical point lies inside [lo, hi]
    if _grid_point_in(lo, hi, Fraction(1, 4)):
        out = Interval(out.lo, Fraction(1))
    if _grid_point_in(lo, hi, Fraction(3, 4)):
        out = Interval(Fraction(-1), out.hi)
    return out


@lru_cache(maxsize=1 << 16)
def cos_2pi_range(lo: Fraction, hi: Fraction) -> Interval:
    """Enclosure of {cos(2*pi*t) : t in [lo, hi]}."""
    if hi - lo >= 1:
        return Interval(Fraction(-1), Fraction(1))
    arg = 2 * _iv.pi * _iv_from_fractions(lo, hi)
    a, b = _iv_endpoints(_iv.cos(arg))
    out = Interval(max(a, Fraction(-1)), min(b, Fraction(1)))
    if _grid_point_in(lo, hi, Fraction(0)):
        out = Interval(out.lo, Fraction(1))
    if _grid_point_in(lo, hi, Fraction(1, 2)):
        out = Interval(Fraction(-1), out.hi)
    return out


def _grid_point_in(lo: Fraction, hi: Fraction, phase: Fraction) -> bool:
    # is there an integer k with lo <= phase + k <= hi?
    k = math.ceil(lo - phase)
    return lo <= phase + k <= hi


def atan2_range(y: Interval, x: Interval) -> Interval:
    """Enclosure of atan2 over the rectangle y x x.

    Raises EnclosureError when the rectangle contains the origin (the
    angle is then undefined).  Near the branch cut (x < 0, y straddling 0)
    a sound but wide enclosure is returned; callers detect the width and
    refine their inputs.
    """
    if x.contains_zero() and y.contains_zero():
        raise EnclosureError("atan2 rectangle contains the origin")
    res = _iv.atan2(_iv_from_fractions(y.lo, y.hi), _iv_from_fractions(x.lo, x.hi))
    lo, hi = _iv_endpoints(res)
    return Interval(lo, hi)


@dataclass(frozen=True)
class Box:
    """Axis-aligned rectangle with exact rational corners."""

    x: Interval
    y: Interval

    @staticmethod
    def from_corners(x0, y0, x1, y1) -> "Box":
        return Box(Interval(Fraction(x0), Fraction(x1)), Interval(Fraction(y0), Fraction(y1)))

    def split4(self) -> tuple["Box", "Box", "Box", "Box"]:
        xm = self.x.midpoint()
        ym = self.y.midpoint()
        return (
            Box(Interval(self.x.lo, xm), Interval(self.y.lo, ym)),
            Box(Interval(xm, self.x.hi), Interval(self.y.lo, ym)),
            Box(Interval(self.x.lo, xm), Interval(ym, self.y.hi)),
            Box(Interval(xm, self.x.hi), Interval(ym, self.y.hi)),
        )

    def contains_point(self, p: tuple[Fraction, Fraction]) -> bool:
        return self.x.contains(p[0]) and self.y.contains(p[1])

    def midpoint(self) -> tuple[Fraction, Fraction]:
        return (self.x.midpoint(), self.y.midpoint())

    def widths(self) -> tuple[Fraction, Fraction]:
        return (self.x.width(), self.y.width())

    def intersects(self, other: "Box") -> bool:
        return self.x.intersects(other.x) and self.y.intersects(other.y)

    def sample(self, tx: Fraction, ty: Fraction) -> tuple[Fraction, Fraction]:
        """Point at barycentric coordinates (tx, ty) in [0,1]^2."""
        return (
            self.x.lo + tx * self.x.width(),
            self.y.lo + ty * self.y.width(),
        )

    def __str__(self) -> str:
        return f"[{self.x.lo}, {self.x.hi}] x [{self.y.lo}, {self.y.hi}]"
