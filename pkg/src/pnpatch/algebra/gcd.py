"""Multivariate gcd for the optional reduction pass (delegates to sympy)."""

from __future__ import annotations

from fractions import Fraction

import sympy

from .polynomial import BivariatePolynomial

_u, _v = sympy.symbols("u v")


def _to_sympy(p: BivariatePolynomial) -> sympy.Poly:
    terms = {(i, j): sympy.Rational(a.numerator, a.denominator) for (i, j), a in p.items()}
    return sympy.Poly.from_dict(terms or {(0, 0): 0}, _u, _v, domain="QQ")


def _from_sympy(p: sympy.Poly) -> BivariatePolynomial:
    return BivariatePolynomial(
        {m: Fraction(int(c.p), int(c.q)) for m, c in p.as_dict().items()}
    )


def poly_gcd(a: BivariatePolynomial, b: BivariatePolynomial) -> BivariatePolynomial:
    """Monic-in-lex gcd of two polynomials over Q."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    g = _from_sympy(sympy.gcd(_to_sympy(a), _to_sympy(b)))
    lc = g.leading_term()[1]
    return g * (1 / lc)
