"""Tangent planes, the Blaschke cylinder and the isotropic model.

A tangent plane ``n . x = h`` with unit normal ``n`` is a point ``(n, h)`` of
the cylinder ``S^2 x R`` in four-space. The isotropic map sends it to
``(n1, n2, h) / (1 - n3)``; the inverse map pulls any polynomial patch of the
isotropic space back to a rational unit normal field plus a rational support
field, and the envelope of that plane family is a surface with Pythagorean
normals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Tuple

from .algebra import (
    U,
    V,
    BivariatePolynomial,
    BivariateRationalFunction,
    RationalVec3Field,
    as_fraction,
    solve3,
)
from .errors import (
    DegeneratePlaneError,
    GaussDegenerateError,
    GloballyDegenerateError,
    NorthPoleError,
    SingularError,
    ZeroNormalError,
)

Vec3 = Tuple[Fraction, Fraction, Fraction]

#: tolerance for rationalizing normals whose Euclidean norm is irrational
NORMALIZE_TOL = 1e-15


class BlaschkePoint(NamedTuple):
    x1: Fraction
    x2: Fraction
    x3: Fraction
    x4: Fraction


class IsotropicPoint(NamedTuple):
    y1: Fraction
    y2: Fraction
    y3: Fraction


@dataclass(frozen=True)
class TangentPlaneData:
    """Oriented plane {x : n . x = h} with unit normal n."""

    n: Vec3
    h: Fraction


@dataclass(frozen=True)
class IsotropicPlane:
    """Plane through ``anchor`` with normal ``m`` in isotropic coordinates."""

    m: Vec3
    anchor: IsotropicPoint

    def __post_init__(self):
        if not any(self.m):
            raise DegeneratePlaneError("isotropic plane with zero normal")

    def contains_direction(self, w: Sequence) -> bool:
        return sum(a * b for a, b in zip(self.m, w)) == 0


def _vec(x) -> Vec3:
    t = tuple(as_fraction(c) for c in x)
    if len(t) != 3:
        raise ValueError("expected a 3-vector")
    return t


def _dot(a, b):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def exact_sqrt(q: Fraction) -> Optional[Fraction]:
    """Square root of a non-negative rational if it is rational, else None."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def rational_unit_vector(n_raw, tol: float = NORMALIZE_TOL) -> Vec3:
    """Normalize exactly when the norm is rational.

    Otherwise the float direction is pushed through stereographic
    coordinates, which are rationalized to ``tol`` and mapped back; the
    result is an exactly unit rational vector within about ``tol`` of the
    true direction.
    """
    n = _vec(n_raw)
    nn = _dot(n, n)
    if nn == 0:
        raise ZeroNormalError("zero normal vector")
    r = exact_sqrt(nn)
    if r is not None:
        return tuple(c / r for c in n)
    f = [float(c) for c in n]
    norm = math.sqrt(sum(c * c for c in f))
    f = [c / norm for c in f]
    # project from whichever pole is farther away, for conditioning
    sgn = -1.0 if f[2] > 0 else 1.0
    den = 1.0 + sgn * f[2]
    max_den = int(1 / tol) * 8
    s1 = Fraction(f[0] / den).limit_denominator(max_den)
    s2 = Fraction(f[1] / den).limit_denominator(max_den)
    q = 1 + s1 * s1 + s2 * s2
    z = (1 - s1 * s1 - s2 * s2) / q
    return (2 * s1 / q, 2 * s2 / q, z if sgn > 0 else -z)


def support_value(p, n_raw) -> TangentPlaneData:
    """Unit normal and oriented distance of the tangent plane at p."""
    nh = rational_unit_vector(n_raw)
    return TangentPlaneData(nh, _dot(_vec(p), nh))


def to_blaschke(plane: TangentPlaneData) -> BlaschkePoint:
    n = plane.n
    if _dot(n, n) != 1:
        raise ValueError("Blaschke points need an exactly unit normal")
    return BlaschkePoint(n[0], n[1], n[2], plane.h)


def iota(b: Sequence) -> IsotropicPoint:
    """Isotropic map (x1, x2, x3, x4) -> (x1, x2, x4) / (1 - x3)."""
    x1, x2, x3, x4 = (as_fraction(c) for c in b)
    if x3 == 1:
        raise NorthPoleError()
    s = 1 - x3
    return IsotropicPoint(x1 / s, x2 / s, x4 / s)


def iota_inv(y: Sequence) -> BlaschkePoint:
    """Inverse isotropic map.

    The third coordinate is (y1^2 + y2^2 - 1) / (1 + y1^2 + y2^2), the sign
    that makes this an exact inverse of :func:`iota`.
    """
    y1, y2, y3 = (as_fraction(c) for c in y)
    r = y1 * y1 + y2 * y2
    s = 1 + r
    return BlaschkePoint(2 * y1 / s, 2 * y2 / s, (r - 1) / s, 2 * y3 / s)


def iota_inv_jacobian(y: Sequence):
    """4x3 Jacobian of :func:`iota_inv` at y (rows x1..x4, columns y1..y3)."""
    y1, y2, y3 = (as_fraction(c) for c in y)
    s = 1 + y1 * y1 + y2 * y2
    s2 = s * s
    return [
        [2 * (s - 2 * y1 * y1) / s2, -4 * y1 * y2 / s2, Fraction(0)],
        [-4 * y1 * y2 / s2, 2 * (s - 2 * y2 * y2) / s2, Fraction(0)],
        [4 * y1 / s2, 4 * y2 / s2, Fraction(0)],
        [-4 * y1 * y3 / s2, -4 * y2 * y3 / s2, 2 / s],
    ]


def tangent_plane_tau(a: Sequence, p: Sequence) -> IsotropicPlane:
    """Plane tau at isotropic point a that a patch must touch to reproduce p.

    Its normal is J(iota_inv)(a)^T (p1, p2, p3, -1).
    """
    a = IsotropicPoint(*(as_fraction(c) for c in a))
    c = (*_vec(p), Fraction(-1))
    J = iota_inv_jacobian(a)
    m = tuple(sum((J[r][k] * c[r] for r in range(4)), Fraction(0)) for k in range(3))
    if not any(m):
        raise DegeneratePlaneError(f"tangent plane normal vanishes at {tuple(a)}")
    return IsotropicPlane(m, a)


def envelope_solve(n, nu, nv, h, hu, hv) -> Vec3:
    """Point x with n.x = h, nu.x = hu, nv.x = hv (exact Cramer solve)."""
    try:
        return tuple(solve3([_vec(n), _vec(nu), _vec(nv)], [h, hu, hv]))
    except SingularError as exc:
        raise GaussDegenerateError(
            "normal and its derivatives are linearly dependent (parabolic point)"
        ) from exc


def sphere_param(u, v) -> Vec3:
    """Stereographic sphere parameterization projecting from the south pole.

    (2u, 2v, 1 - u^2 - v^2) / (1 + u^2 + v^2). Note the opposite pole to
    :func:`iota_inv`; the two conventions are never mixed internally.
    """
    u, v = as_fraction(u), as_fraction(v)
    s = 1 + u * u + v * v
    return (2 * u / s, 2 * v / s, (1 - u * u - v * v) / s)


def sphere_param_field() -> RationalVec3Field:
    s = 1 + U * U + V * V
    return RationalVec3Field.from_polynomials((2 * U, 2 * V, 1 - U * U - V * V), s)


# --- fields -----------------------------------------------------------------


def _as_polys(y) -> Tuple[BivariatePolynomial, BivariatePolynomial, BivariatePolynomial]:
    if hasattr(y, "polynomials"):
        y = y.polynomials()
    polys = tuple(y)
    if len(polys) != 3 or not all(isinstance(p, BivariatePolynomial) for p in polys):
        raise TypeError("isotropic patch must be three BivariatePolynomials")
    return polys


def homogeneous_dual(y):
    """(N, D, H) with n = N / D and h = H / D for a polynomial patch y.

    N = (2 y1, 2 y2, y1^2 + y2^2 - 1), D = 1 + y1^2 + y2^2 = |N|, H = 2 y3.
    """
    y1, y2, y3 = _as_polys(y)
    r = y1 * y1 + y2 * y2
    return (2 * y1, 2 * y2, r - 1), r + 1, 2 * y3


def iota_inv_field(y) -> Tuple[RationalVec3Field, BivariateRationalFunction]:
    """Pull a polynomial isotropic patch back to (unit normal field, support field)."""
    N, D, H = homogeneous_dual(y)
    return RationalVec3Field.from_polynomials(N, D), BivariateRationalFunction(H, D)


def _pcross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _pdot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


@dataclass
class RationalPNPatch:
    """Primal patch: unit normal field, support field and envelope points.

    ``source`` is the isotropic polynomial patch the fields were pulled back
    from (None for patches built by other means). It enables the fast
    floating-point sampler and is carried along under offsets.
    """

    n_field: RationalVec3Field
    h_field: BivariateRationalFunction
    x_field: RationalVec3Field
    source: Optional[Tuple[BivariatePolynomial, BivariatePolynomial, BivariatePolynomial]] = None
    label: str = ""
    meta: dict = field(default_factory=dict)

    def point(self, u, v) -> Vec3:
        return self.x_field.evaluate(u, v)

    def normal(self, u, v) -> Vec3:
        return self.n_field.evaluate(u, v)

    def support(self, u, v) -> Fraction:
        return self.h_field.evaluate(u, v)


def xi_polynomials(y):
    """Envelope of the plane family of y by symbolic Cramer's rule.

    Returns (X, Delta) with x = X / Delta, where Delta = det(N, N_u, N_v) and
    X = H (N_u x N_v) + H_u (N_v x N) + H_v (N x N_u).
    """
    N, D, H = homogeneous_dual(y)
    Nu = tuple(c.diff("u") for c in N)
    Nv = tuple(c.diff("v") for c in N)
    uv = _pcross(Nu, Nv)
    delta = _pdot(N, uv)
    if delta.is_zero():
        raise GloballyDegenerateError(
            "det(n, n_u, n_v) vanishes identically: constant or curve-like Gauss image"
        )
    Hu, Hv = H.diff("u"), H.diff("v")
    vn = _pcross(Nv, N)
    nu_ = _pcross(N, Nu)
    X = tuple(H * a + Hu * b + Hv * c for a, b, c in zip(uv, vn, nu_))
    return X, delta


def xi_patch(y, label: str = "") -> RationalPNPatch:
    """Map an isotropic polynomial patch to its primal PN patch."""
    polys = _as_polys(y)
    n_field, h_field = iota_inv_field(polys)
    X, delta = xi_polynomials(polys)
    x_field = RationalVec3Field.from_polynomials(X, delta)
    return RationalPNPatch(n_field, h_field, x_field, source=polys, label=label)


def envelope_point_numeric(y, u, v) -> Vec3:
    """Envelope point by solving the pointwise system (no symbolic expansion)."""
    polys = _as_polys(y)
    u, v = as_fraction(u), as_fraction(v)
    n_f, h_f = iota_inv_field(polys)
    n = n_f.evaluate(u, v)
    nu = n_f.diff("u").evaluate(u, v)
    nv = n_f.diff("v").evaluate(u, v)
    return envelope_solve(n, nu, nv, h_f.evaluate(u, v), h_f.diff("u").evaluate(u, v),
                          h_f.diff("v").evaluate(u, v))

