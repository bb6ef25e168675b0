"""Bivariate rational functions and 3-vector fields of them."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import PoleError
from .polynomial import ONE, BivariatePolynomial, as_fraction


class BivariateRationalFunction:
    """num/den with den != 0 and a positive lexicographic leading coefficient.

    No automatic gcd cancellation happens; call :meth:`reduced` explicitly.
    Sums and differences of operands with structurally equal denominators
    keep that denominator instead of squaring it.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _poly(num)
        den = ONE if den is None else _poly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator polynomial")
        if den.leading_term()[1] < 0:
            num, den = -num, -den
        self.num = num
        self.den = den

    @classmethod
    def constant(cls, a):
        return cls(BivariatePolynomial.constant(a))

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return BivariateRationalFunction(self.num + other.num, self.den)
        return BivariateRationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return BivariateRationalFunction(-self.num, self.den)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return BivariateRationalFunction(self.num * other, self.den)
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.den == ONE:
            return BivariateRationalFunction(self.num * other.num, self.den)
        if self.den == ONE:
            return BivariateRationalFunction(self.num * other.num, other.den)
        return BivariateRationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return BivariateRationalFunction(self.num, self.den * other)
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return BivariateRationalFunction(self.num * other.den, self.den * other.num)

    def diff(self, var: str) -> "BivariateRationalFunction":
        if self.den.is_constant():
            return BivariateRationalFunction(self.num.diff(var), self.den)
        return BivariateRationalFunction(
            self.num.diff(var) * self.den - self.num * self.den.diff(var),
            self.den * self.den,
        )

    def evaluate(self, u, v) -> Fraction:
        u, v = as_fraction(u), as_fraction(v)
        d = self.den.evaluate(u, v)
        if not d:
            raise PoleError(f"denominator vanishes at ({u}, {v})")
        return self.num.evaluate(u, v) / d

    __call__ = evaluate

    def evaluate_float(self, u: float, v: float) -> float:
        return self.num.evaluate_float(u, v) / self.den.evaluate_float(u, v)

    def equals(self, other) -> bool:
        """Exact identity test by cross-multiplication."""
        other = _coerce(other)
        return self.num * other.den == other.num * self.den

    def reduced(self) -> "BivariateRationalFunction":
        """Cancel the polynomial gcd of numerator and denominator.

        This is the optional (and comparatively slow) normalization pass.
        """
        from .gcd import poly_gcd

        if self.num.is_zero():
            return BivariateRationalFunction(BivariatePolynomial.zero())
        g = poly_gcd(self.num, self.den)
        num = self.num.exact_divide(g)
        den = self.den.exact_divide(g)
        lc = den.leading_term()[1]
        return BivariateRationalFunction(num * (1 / lc), den * (1 / lc))

    def __repr__(self):
        if self.den == ONE:
            return f"RF({self.num!r})"
        return f"RF(({self.num!r}) / ({self.den!r}))"


def _poly(x) -> BivariatePolynomial:
    if isinstance(x, BivariatePolynomial):
        return x
    return BivariatePolynomial.constant(as_fraction(x))


def _coerce(x):
    if isinstance(x, BivariateRationalFunction):
        return x
    if isinstance(x, BivariatePolynomial):
        return BivariateRationalFunction(x)
    if isinstance(x, (int, Fraction)):
        return BivariateRationalFunction.constant(x)
    return NotImplemented


def as_rational_function(x) -> BivariateRationalFunction:
    r = _coerce(x)
    if r is NotImplemented:
        raise TypeError(f"cannot interpret {x!r} as a rational function")
    return r


class RationalVec3Field:
    """Three rational functions forming a point, normal or vector field."""

    __slots__ = ("components",)

    def __init__(self, components: Iterable):
        comps = tuple(as_rational_function(c) for c in components)
        if len(comps) != 3:
            raise ValueError("a Vec3 field needs exactly three components")
        self.components = comps

    @classmethod
    def from_polynomials(cls, polys: Sequence, den=None):
        return cls(BivariateRationalFunction(p, den) for p in polys)

    def __getitem__(self, k):
        return self.components[k]

    def __iter__(self):
        return iter(self.components)

    def __add__(self, other: "RationalVec3Field"):
        return RationalVec3Field(a + b for a, b in zip(self, other))

    def __sub__(self, other: "RationalVec3Field"):
        return RationalVec3Field(a - b for a, b in zip(self, other))

    def __neg__(self):
        return RationalVec3Field(-a for a in self)

    def scale(self, s) -> "RationalVec3Field":
        s = as_rational_function(s) if not isinstance(s, (int, Fraction)) else s
        return RationalVec3Field(a * s for a in self)

    def dot(self, other: "RationalVec3Field") -> BivariateRationalFunction:
        return dot(self, other)

    def cross(self, other: "RationalVec3Field") -> "RationalVec3Field":
        return cross(self, other)

    def diff(self, var: str) -> "RationalVec3Field":
        return RationalVec3Field(a.diff(var) for a in self)

    def evaluate(self, u, v):
        return tuple(a.evaluate(u, v) for a in self)

    def evaluate_float(self, u: float, v: float):
        return tuple(a.evaluate_float(u, v) for a in self)

    def common_denominator(self):
        """Return (numerators, den) with self == numerators / den."""
        dens = [c.den for c in self]
        if dens[0] == dens[1] == dens[2]:
            return [c.num for c in self], dens[0]
        den = ONE
        uniq = []
        for d in dens:
            if d not in uniq:
                uniq.append(d)
                den = den * d
        nums = []
        for c in self:
            other = ONE
            for d in uniq:
                if d != c.den:
                    other = other * d
            nums.append(c.num * other)
        return nums, den

    def __repr__(self):
        return f"RationalVec3Field{self.components!r}"


def cross(a: RationalVec3Field, b: RationalVec3Field) -> RationalVec3Field:
    a1, a2, a3 = a
    b1, b2, b3 = b
    return RationalVec3Field((a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1))


def dot(a: RationalVec3Field, b: RationalVec3Field) -> BivariateRationalFunction:
    a1, a2, a3 = a
    b1, b2, b3 = b
    return a1 * b1 + a2 * b2 + a3 * b3
