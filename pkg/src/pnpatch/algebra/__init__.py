"""Exact rational arithmetic: polynomials, rational functions, linear algebra."""

from fractions import Fraction as ExactRational

from .identity import IdentityCheck, rational_identity, vanishes_identically
from .linalg import det3, matvec, nullspace, rank, rref, solve3
from .polynomial import ONE, U, V, ZERO, BivariatePolynomial, as_fraction
from .rational_function import (
    BivariateRationalFunction,
    RationalVec3Field,
    as_rational_function,
    cross,
    dot,
)

__all__ = [
    "ExactRational",
    "BivariatePolynomial",
    "BivariateRationalFunction",
    "RationalVec3Field",
    "IdentityCheck",
    "as_fraction",
    "as_rational_function",
    "cross",
    "det3",
    "dot",
    "matvec",
    "nullspace",
    "rank",
    "rational_identity",
    "rref",
    "solve3",
    "vanishes_identically",
    "U",
    "V",
    "ONE",
    "ZERO",
]
