"""Sparse bivariate polynomials in (u, v) with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Dict, Iterable, Mapping, Tuple

Exp = Tuple[int, int]


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and exact strings ("p/q", "0.25") to Fraction.

    Floats are accepted and converted exactly (binary value), which is almost
    never what a caller wants for user input; see ``pnpatch.io`` for decimal
    place-value parsing.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class BivariatePolynomial:
    """Immutable sparse polynomial sum c_ij u^i v^j.

    Zero coefficients are never stored; the zero polynomial has an empty map
    and ``bidegree`` ``None``.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[Exp, object] | None = None):
        c: Dict[Exp, Fraction] = {}
        if coeffs:
            for (i, j), a in coeffs.items():
                if i < 0 or j < 0:
                    raise ValueError(f"negative exponent {(i, j)}")
                a = as_fraction(a)
                if a:
                    c[(int(i), int(j))] = a
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: Dict[Exp, Fraction]) -> "BivariatePolynomial":
        p = cls.__new__(cls)
        p._c = c
        p._hash = None
        return p

    # constructors
    @classmethod
    def constant(cls, a) -> "BivariatePolynomial":
        return cls({(0, 0): a})

    @classmethod
    def u(cls) -> "BivariatePolynomial":
        return cls({(1, 0): 1})

    @classmethod
    def v(cls) -> "BivariatePolynomial":
        return cls({(0, 1): 1})

    @classmethod
    def zero(cls) -> "BivariatePolynomial":
        return cls._raw({})

    @classmethod
    def univariate(cls, coeffs: Iterable, var: str = "u") -> "BivariatePolynomial":
        """Build from a power-basis coefficient list in one variable."""
        if var == "u":
            return cls({(k, 0): a for k, a in enumerate(coeffs)})
        if var == "v":
            return cls({(0, k): a for k, a in enumerate(coeffs)})
        raise ValueError(var)

    # inspection
    @property
    def coeffs(self) -> Dict[Exp, Fraction]:
        return dict(self._c)

    def items(self):
        return self._c.items()

    def coeff(self, i: int, j: int) -> Fraction:
        return self._c.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def __len__(self):
        return len(self._c)

    @property
    def bidegree(self) -> Exp | None:
        if not self._c:
            return None
        return (max(i for i, _ in self._c), max(j for _, j in self._c))

    @property
    def total_degree(self) -> int:
        if not self._c:
            return -1
        return max(i + j for i, j in self._c)

    def is_constant(self) -> bool:
        return not self._c or set(self._c) == {(0, 0)}

    def leading_term(self) -> Tuple[Exp, Fraction]:
        """Leading term in plain lexicographic exponent order."""
        if not self._c:
            raise ValueError("zero polynomial has no leading term")
        e = max(self._c)
        return e, self._c[e]

    def denominator_lcm(self) -> int:
        return lcm(1, *(a.denominator for a in self._c.values()))

    def integer_coeffs(self, scale: int = 1) -> Dict[Exp, int]:
        out = {}
        for e, a in self._c.items():
            b = a * scale
            if b.denominator != 1:
                raise ValueError("scale does not clear all denominators")
            out[e] = b.numerator
        return out

    # arithmetic
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other._c:
            return self
        c = dict(self._c)
        for e, a in other._c.items():
            s = c.get(e, 0) + a
            if s:
                c[e] = s
            else:
                c.pop(e, None)
        return BivariatePolynomial._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return BivariatePolynomial._raw({e: -a for e, a in self._c.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return BivariatePolynomial._raw({})
            return BivariatePolynomial._raw({e: a * other for e, a in self._c.items()})
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not self._c or not other._c:
            return BivariatePolynomial._raw({})
        c: Dict[Exp, Fraction] = {}
        get = c.get
        for (i1, j1), a in self._c.items():
            for (i2, j2), b in other._c.items():
                e = (i1 + i2, j1 + j2)
                c[e] = get(e, 0) + a * b
        return BivariatePolynomial._raw({e: a for e, a in c.items() if a})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("polynomial divided by zero")
            inv = 1 / Fraction(other)
            return BivariatePolynomial._raw({e: a * inv for e, a in self._c.items()})
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = BivariatePolynomial.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    # calculus
    def diff(self, var: str) -> "BivariatePolynomial":
        if var == "u":
            return BivariatePolynomial._raw(
                {(i - 1, j): a * i for (i, j), a in self._c.items() if i}
            )
        if var == "v":
            return BivariatePolynomial._raw(
                {(i, j - 1): a * j for (i, j), a in self._c.items() if j}
            )
        raise ValueError(f"unknown variable {var!r}")

    def integrate(self, var: str) -> "BivariatePolynomial":
        """Antiderivative with zero integration constant."""
        if var == "u":
            return BivariatePolynomial._raw(
                {(i + 1, j): a / (i + 1) for (i, j), a in self._c.items()}
            )
        if var == "v":
            return BivariatePolynomial._raw(
                {(i, j + 1): a / (j + 1) for (i, j), a in self._c.items()}
            )
        raise ValueError(f"unknown variable {var!r}")

    # evaluation
    def __call__(self, u, v) -> Fraction:
        return self.evaluate(u, v)

    def evaluate(self, u, v) -> Fraction:
        u = as_fraction(u)
        v = as_fraction(v)
        bd = self.bidegree
        if bd is None:
            return Fraction(0)
        upow = [Fraction(1)]
        for _ in range(bd[0]):
            upow.append(upow[-1] * u)
        vpow = [Fraction(1)]
        for _ in range(bd[1]):
            vpow.append(vpow[-1] * v)
        return sum((a * upow[i] * vpow[j] for (i, j), a in self._c.items()), Fraction(0))

    def evaluate_float(self, u: float, v: float) -> float:
        return float(sum(float(a) * u**i * v**j for (i, j), a in self._c.items()))

    def restrict(self, u=None, v=None) -> "BivariatePolynomial":
        """Substitute a constant for one variable, keeping the other."""
        if (u is None) == (v is None):
            raise ValueError("restrict exactly one variable")
        c: Dict[Exp, Fraction] = {}
        if u is not None:
            u = as_fraction(u)
            for (i, j), a in self._c.items():
                c[(0, j)] = c.get((0, j), 0) + a * u**i
        else:
            v = as_fraction(v)
            for (i, j), a in self._c.items():
                c[(i, 0)] = c.get((i, 0), 0) + a * v**j
        return BivariatePolynomial._raw({e: a for e, a in c.items() if a})

    def coefficient_matrix(self, shape: Exp | None = None):
        """Dense (deg_u+1) x (deg_v+1) nested list of Fractions."""
        bd = self.bidegree or (0, 0)
        if shape is None:
            shape = (bd[0] + 1, bd[1] + 1)
        out = [[Fraction(0)] * shape[1] for _ in range(shape[0])]
        for (i, j), a in self._c.items():
            out[i][j] = a
        return out

    # division
    def exact_divide(self, other: "BivariatePolynomial") -> "BivariatePolynomial | None":
        """Quotient q with self == q * other, or None if other does not divide."""
        if not other._c:
            raise ZeroDivisionError("division by the zero polynomial")
        (li, lj), lc = other.leading_term()
        rem = dict(self._c)
        q: Dict[Exp, Fraction] = {}
        while rem:
            (ri, rj) = max(rem)
            if ri < li or rj < lj:
                return None
            t = rem[(ri, rj)] / lc
            e = (ri - li, rj - lj)
            q[e] = t
            for (oi, oj), b in other._c.items():
                k = (oi + e[0], oj + e[1])
                s = rem.get(k, 0) - t * b
                if s:
                    rem[k] = s
                else:
                    rem.pop(k, None)
        return BivariatePolynomial._raw(q)

    # display
    def __repr__(self):
        if not self._c:
            return "0"
        terms = []
        for (i, j) in sorted(self._c, reverse=True):
            a = self._c[(i, j)]
            mono = "*".join(
                s for s in (
                    "" if i == 0 else ("u" if i == 1 else f"u^{i}"),
                    "" if j == 0 else ("v" if j == 1 else f"v^{j}"),
                ) if s
            )
            if not mono:
                terms.append(str(a))
            elif a == 1:
                terms.append(mono)
            elif a == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"({a})*{mono}")
        return " + ".join(terms).replace("+ -", "- ")


def _coerce(x):
    if isinstance(x, BivariatePolynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return BivariatePolynomial.constant(x)
    return NotImplemented


U = BivariatePolynomial.u()
V = BivariatePolynomial.v()
ONE = BivariatePolynomial.constant(1)
ZERO = BivariatePolynomial.zero()
