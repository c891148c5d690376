"""Exact symbolic expressions on the plane and the flat torus.

An ``Expr`` is a normalized sum of terms

    coeff * pi^k * x^a * y^b * sin2px^p * cos2px^e * sin2py^q * cos2py^f

with exact rational coefficients.  On the plane only ``x``, ``y`` (and the
scalar unit ``pi``) may appear; on the torus the generators are the four
trig functions sin(2*pi*x), cos(2*pi*x), sin(2*pi*y), cos(2*pi*y) plus
``pi``.  Normal form eliminates squares of cosines via cos^2 = 1 - sin^2,
so every stored term has cosine exponents 0 or 1; with that convention two
expressions are equal as functions on their domain iff their normal forms
are identical.

The unit ``pi`` enters through derivatives of the trig generators
(d/dx sin(2*pi*x) = 2*pi*cos(2*pi*x)) and is carried symbolically, never
as a float.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, Optional

from .intervals import Box, Interval, pi_power, sin_2pi_range, cos_2pi_range

PLANE = "plane"
TORUS = "torus"

# term key: (kpi, ex, ey, s1, c1, s2, c2)
Key = tuple[int, int, int, int, int, int, int]

_ONE_KEY: Key = (0, 0, 0, 0, 0, 0, 0)

_PLANE_GEN_KEYS = {"x": (0, 1, 0, 0, 0, 0, 0), "y": (0, 0, 1, 0, 0, 0, 0)}
_TORUS_GEN_KEYS = {
    "sin2px": (0, 0, 0, 1, 0, 0, 0),
    "cos2px": (0, 0, 0, 0, 1, 0, 0),
    "sin2py": (0, 0, 0, 0, 0, 1, 0),
    "cos2py": (0, 0, 0, 0, 0, 0, 1),
}
_PI_KEY: Key = (1, 0, 0, 0, 0, 0, 0)

_SIN_QUARTER = {
    Fraction(0): Fraction(0),
    Fraction(1, 4): Fraction(1),
    Fraction(1, 2): Fraction(0),
    Fraction(3, 4): Fraction(-1),
}
_COS_QUARTER = {
    Fraction(0): Fraction(1),
    Fraction(1, 4): Fraction(0),
    Fraction(1, 2): Fraction(-1),
    Fraction(3, 4): Fraction(0),
}


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DomainError(ValueError):
    pass


class ExactEvalError(ArithmeticError):
    """The requested point has no exact rational value for this expression."""


def _normalize(terms: dict[Key, Fraction]) -> dict[Key, Fraction]:
    """Combine like terms and rewrite cos^2 -> 1 - sin^2 until cosine
    exponents are at most 1."""
    out: dict[Key, Fraction] = {}
    stack = [(k, c) for k, c in terms.items() if c != 0]
    while stack:
        key, coeff = stack.pop()
        kpi, ex, ey, s1, c1, s2, c2 = key
        if c1 >= 2:
            m, r = divmod(c1, 2)
            for j in range(m + 1):
                cj = coeff * math.comb(m, j) * (-1) ** j
                stack.append(((kpi, ex, ey, s1 + 2 * j, r, s2, c2), cj))
            continue
        if c2 >= 2:
            m, r = divmod(c2, 2)
            for j in range(m + 1):
                cj = coeff * math.comb(m, j) * (-1) ** j
                stack.append(((kpi, ex, ey, s1, c1, s2 + 2 * j, r), cj))
            continue
        acc = out.get(key, Fraction(0)) + coeff
        if acc == 0:
            out.pop(key, None)
        else:
            out[key] = acc
    return out


class Expr:
    """Immutable normal-form expression tied to a domain."""

    __slots__ = ("domain", "_terms", "_hash")

    def __init__(self, domain: str, terms: dict[Key, Fraction]):
        if domain not in (PLANE, TORUS):
            raise DomainError(f"unknown domain {domain!r}")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "_terms", _normalize(terms))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Expr is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(domain: str) -> "Expr":
        return Expr(domain, {})

    @staticmethod
    def const(value, domain: str) -> "Expr":
        return Expr(domain, {_ONE_KEY: Fraction(value)})

    @staticmethod
    def gen(name: str, domain: str) -> "Expr":
        if name == "pi":
            return Expr(domain, {_PI_KEY: Fraction(1)})
        if name in _PLANE_GEN_KEYS:
            if domain != PLANE:
                raise DomainError(f"generator {name!r} is not a function on the torus")
            return Expr(domain, {_PLANE_GEN_KEYS[name]: Fraction(1)})
        if name in _TORUS_GEN_KEYS:
            if domain != TORUS:
                raise DomainError(f"torus generator {name!r} used under plane domain")
            return Expr(domain, {_TORUS_GEN_KEYS[name]: Fraction(1)})
        raise DomainError(f"unknown generator {name!r}")

    # -- ring operations ----------------------------------------------

    def _coerce(self, other) -> "Expr":
        if isinstance(other, Expr):
            if other.domain != self.domain:
                raise DomainError("domain mismatch")
            return other
        return Expr.const(other, self.domain)

    def __add__(self, other) -> "Expr":
        other = self._coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return Expr(self.domain, out)

    __radd__ = __add__

    def __neg__(self) -> "Expr":
        return Expr(self.domain, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> "Expr":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Expr":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "Expr":
        other = self._coerce(other)
        out: dict[Key, Fraction] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                key = tuple(a + b for a, b in zip(k1, k2))
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return Expr(self.domain, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Expr":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Expr.const(1, self.domain)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- predicates and views -----------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def is_polynomial(self) -> bool:
        """No trig generators and no pi unit (plain rational polynomial)."""
        return all(k[0] == 0 and k[3] == k[4] == k[5] == k[6] == 0 for k in self._terms)

    def has_trig(self) -> bool:
        return any(k[3] or k[4] or k[5] or k[6] for k in self._terms)

    def terms(self) -> Iterator[tuple[Key, Fraction]]:
        return iter(sorted(self._terms.items(), reverse=True))

    def coefficient(self, key: Key) -> Fraction:
        return self._terms.get(key, Fraction(0))

    def total_degree(self) -> int:
        """Highest generator degree (pi excluded)."""
        if not self._terms:
            return 0
        return max(sum(k[1:]) for k in self._terms)

    def pi_degree(self) -> int:
        if not self._terms:
            return 0
        return max(k[0] for k in self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Expr):
            return NotImplemented
        return self.domain == other.domain and self._terms == other._terms

    def __hash__(self):
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash((self.domain, frozenset(self._terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- calculus ------------------------------------------------------

    def derive(self, var: str) -> "Expr":
        """Exact partial derivative with respect to 'x' or 'y'."""
        if var not in ("x", "y"):
            raise ValueError("var must be 'x' or 'y'")
        out: dict[Key, Fraction] = {}

        def acc(key: Key, c: Fraction):
            out[key] = out.get(key, Fraction(0)) + c

        for (kpi, ex, ey, s1, c1, s2, c2), coeff in self._terms.items():
            if var == "x":
                if ex:
                    acc((kpi, ex - 1, ey, s1, c1, s2, c2), coeff * ex)
                if s1:
                    acc((kpi + 1, ex, ey, s1 - 1, c1 + 1, s2, c2), coeff * s1 * 2)
                if c1:
                    acc((kpi + 1, ex, ey, s1 + 1, c1 - 1, s2, c2), -coeff * c1 * 2)
            else:
                if ey:
                    acc((kpi, ex, ey - 1, s1, c1, s2, c2), coeff * ey)
                if s2:
                    acc((kpi + 1, ex, ey, s1, c1, s2 - 1, c2 + 1), coeff * s2 * 2)
                if c2:
                    acc((kpi + 1, ex, ey, s1, c1, s2 + 1, c2 - 1), -coeff * c2 * 2)
        return Expr(self.domain, out)

    # -- evaluation ----------------------------------------------------

    def eval_at(self, p: tuple[Fraction, Fraction]) -> Fraction:
        """Exact value at a rational point.

        On the torus this is only defined on the quarter grid (coordinates
        that are multiples of 1/4 mod 1), where sin and cos of 2*pi*t take
        values in {-1, 0, 1}; elsewhere use range_on with a degenerate box.
        """
        px, py = Fraction(p[0]), Fraction(p[1])
        total = Fraction(0)
        for (kpi, ex, ey, s1, c1, s2, c2), coeff in self._terms.items():
            if kpi:
                raise ExactEvalError("pi power has no exact rational value")
            v = coeff
            if ex:
                v *= px**ex
            if ey:
                v *= py**ey
            if s1 or c1 or s2 or c2:
                rx, ry = px % 1, py % 1
                if rx not in _SIN_QUARTER or ry not in _SIN_QUARTER:
                    raise ExactEvalError(
                        f"no exact trig value at ({px}, {py}); use interval evaluation"
                    )
                if s1:
                    v *= _SIN_QUARTER[rx] ** s1
                if c1:
                    v *= _COS_QUARTER[rx] ** c1
                if s2:
                    v *= _SIN_QUARTER[ry] ** s2
                if c2:
                    v *= _COS_QUARTER[ry] ** c2
            total += v
        return total

    def eval_float(self, x: float, y: float) -> float:
        """Fast float evaluation (flow integration, plotting, oracles)."""
        total = 0.0
        for (kpi, ex, ey, s1, c1, s2, c2), coeff in self._terms.items():
            v = float(coeff)
            if kpi:
                v *= math.pi**kpi
            if ex:
                v *= x**ex
            if ey:
                v *= y**ey
            if s1:
                v *= math.sin(2 * math.pi * x) ** s1
            if c1:
                v *= math.cos(2 * math.pi * x) ** c1
            if s2:
                v *= math.sin(2 * math.pi * y) ** s2
            if c2:
                v *= math.cos(2 * math.pi * y) ** c2
            total += v
        return total

    def range_on(self, box: Box) -> Interval:
        """Certified enclosure of the expression over the box.

        Term-wise interval arithmetic with tight integer powers; containment
        of the true range is unconditional since all endpoints are exact.
        """
        sx = cx = sy = cy = None
        total = Interval.point(0)
        for (kpi, ex, ey, s1, c1, s2, c2), coeff in self._terms.items():
            v = Interval.point(coeff)
            if kpi:
                v = v * pi_power(kpi)
            if ex:
                v = v * box.x.int_pow(ex)
            if ey:
                v = v * box.y.int_pow(ey)
            if s1:
                if sx is None:
                    sx = sin_2pi_range(box.x.lo, box.x.hi)
                v = v * sx.int_pow(s1)
            if c1:
                if cx is None:
                    cx = cos_2pi_range(box.x.lo, box.x.hi)
                v = v * cx.int_pow(c1)
            if s2:
                if sy is None:
                    sy = sin_2pi_range(box.y.lo, box.y.hi)
                v = v * sy.int_pow(s2)
            if c2:
                if cy is None:
                    cy = cos_2pi_range(box.y.lo, box.y.hi)
                v = v * cy.int_pow(c2)
            total = total + v
        return total

    # -- printing -------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for key, coeff in self.terms():
            gens = _gens_string(key)
            mag = abs(coeff)
            if gens:
                body = gens if mag == 1 else f"{mag}*{gens}"
            else:
                body = str(mag)
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Expr({self.domain!r}, {self})"


def _gens_string(key: Key) -> str:
    kpi, ex, ey, s1, c1, s2, c2 = key
    names = ("pi", "x", "y", "sin2px", "cos2px", "sin2py", "cos2py")
    factors = []
    for name, e in zip(names, (kpi, ex, ey, s1, c1, s2, c2)):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors)


# ---------------------------------------------------------------------------
# parsing


def _tokenize(text: str):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("NUM", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("IDENT", text[i:j], i))
            i = j
            continue
        if ch in "+-*^()/":
            tokens.append((ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("END", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, domain: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.domain = domain

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind: Optional[str] = None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", tok[2])
        self.pos += 1
        return tok

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.peek()
        if tok[0] != "END":
            raise ParseError(f"unexpected trailing input {tok[1]!r}", tok[2])
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek()[0] == "*":
            self.take()
            e = e * self.unary()
        return e

    def unary(self) -> Expr:
        tok = self.peek()
        if tok[0] == "-":
            self.take()
            return -self.unary()
        if tok[0] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("NUM")
            return base ** int(tok[1])
        return base

    def atom(self) -> Expr:
        tok = self.peek()
        if tok[0] == "NUM":
            self.take()
            value = Fraction(int(tok[1]))
            if self.peek()[0] == "/":
                self.take()
                den = self.take("NUM")
                if int(den[1]) == 0:
                    raise ParseError("zero denominator in ratio literal", den[2])
                value = Fraction(int(tok[1]), int(den[1]))
            return Expr.const(value, self.domain)
        if tok[0] == "IDENT":
            self.take()
            try:
                return Expr.gen(tok[1], self.domain)
            except DomainError as exc:
                raise ParseError(str(exc), tok[2]) from exc
        if tok[0] == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        raise ParseError(f"unexpected token {tok[1]!r}", tok[2])


def parse_expr(text: str, domain: str = PLANE) -> Expr:
    """Parse an expression string into normal form.

    Grammar: identifiers x, y, sin2px, cos2px, sin2py, cos2py, pi;
    operators + - * ^, parentheses, integer and ratio literals "a/b".
    """
    return _Parser(text, domain).parse()


# ---------------------------------------------------------------------------
# exact polynomial division


def divide_exact(a: Expr, b: Expr) -> Optional[Expr]:
    """Exact quotient a/b in the polynomial term ring, or None.

    Long division by the leading monomial in lexicographic order; with a
    single divisor, a zero remainder occurs iff b divides a exactly.
    Intended for pure polynomials (trig-free expressions); pi is treated
    as one more formal variable.
    """
    if a.domain != b.domain:
        raise DomainError("domain mismatch")
    if a.has_trig() or b.has_trig():
        raise ValueError("divide_exact requires trig-free expressions")
    if b.is_zero:
        raise ZeroDivisionError("division by the zero expression")
    rem = dict(a._terms)
    bterms = sorted(b._terms.items(), reverse=True)
    blead_key, blead_coeff = bterms[0]
    quo: dict[Key, Fraction] = {}
    while rem:
        rlead_key = max(rem)
        diff = tuple(r - s for r, s in zip(rlead_key, blead_key))
        if any(d < 0 for d in diff):
            return None
        c = rem[rlead_key] / blead_coeff
        quo[diff] = quo.get(diff, Fraction(0)) + c
        for k, bc in bterms:
            key = tuple(d + e for d, e in zip(diff, k))
            acc = rem.get(key, Fraction(0)) - c * bc
            if acc == 0:
                rem.pop(key, None)
            else:
                rem[key] = acc
    return Expr(a.domain, quo)
