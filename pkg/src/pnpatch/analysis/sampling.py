"""Vectorized floating-point evaluation of PN patches and their first derivatives.

Two routes give the same numbers: patches that remember their isotropic
source are evaluated by solving the pointwise envelope system (cheap, no
symbolic expansion); all others evaluate their stored rational fields.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as npp

from ..algebra import BivariatePolynomial
from ..dualspace import RationalPNPatch


def coeff_matrix(p: BivariatePolynomial, shape=None) -> np.ndarray:
    bd = p.bidegree or (0, 0)
    if shape is None:
        shape = (bd[0] + 1, bd[1] + 1)
    C = np.zeros(shape)
    for (i, j), a in p.items():
        C[i, j] = float(a)
    return C


def _grid(C: np.ndarray, us, vs) -> np.ndarray:
    return npp.polygrid2d(us, vs, C)


def _der(C: np.ndarray, du: int, dv: int) -> np.ndarray:
    out = C
    if du:
        out = npp.polyder(out, du, axis=0) if out.shape[0] > du else np.zeros((1, out.shape[1]))
    if dv:
        out = npp.polyder(out, dv, axis=1) if out.shape[1] > dv else np.zeros((out.shape[0], 1))
    return out


@dataclass
class FieldSamples:
    """Values on the tensor grid us x vs; vector arrays have shape (nu, nv, 3)."""

    us: np.ndarray
    vs: np.ndarray
    x: np.ndarray
    xu: np.ndarray
    xv: np.ndarray
    n: np.ndarray
    nu: np.ndarray
    nv: np.ndarray
    h: np.ndarray

    @property
    def finite(self) -> np.ndarray:
        return np.all(np.isfinite(self.x), axis=-1) & np.all(np.isfinite(self.xu), axis=-1) & np.all(
            np.isfinite(self.xv), axis=-1
        )


def _isotropic_samples(polys, us, vs) -> FieldSamples:
    Cs = [coeff_matrix(p) for p in polys]

    def ev(du, dv):
        return np.stack([_grid(_der(C, du, dv), us, vs) for C in Cs], axis=-1)

    y, yu, yv = ev(0, 0), ev(1, 0), ev(0, 1)
    yuu, yuv, yvv = ev(2, 0), ev(1, 1), ev(0, 2)
    y1, y2, y3 = y[..., 0], y[..., 1], y[..., 2]

    def Nvec(a1, a2, a3):
        return np.stack([2 * a1, 2 * a2, a3], axis=-1)

    N = Nvec(y1, y2, y1**2 + y2**2 - 1)
    Nu = Nvec(yu[..., 0], yu[..., 1], 2 * (y1 * yu[..., 0] + y2 * yu[..., 1]))
    Nv = Nvec(yv[..., 0], yv[..., 1], 2 * (y1 * yv[..., 0] + y2 * yv[..., 1]))

    def second(a, b, ab):
        return Nvec(
            ab[..., 0], ab[..., 1],
            2 * (a[..., 0] * b[..., 0] + y1 * ab[..., 0] + a[..., 1] * b[..., 1] + y2 * ab[..., 1]),
        )

    Nuu, Nuv, Nvv = second(yu, yu, yuu), second(yu, yv, yuv), second(yv, yv, yvv)
    H, Hu, Hv = 2 * y3, 2 * yu[..., 2], 2 * yv[..., 2]
    Huu, Huv, Hvv = 2 * yuu[..., 2], 2 * yuv[..., 2], 2 * yvv[..., 2]

    c_uv, c_vn, c_nu = np.cross(Nu, Nv), np.cross(Nv, N), np.cross(N, Nu)
    with np.errstate(divide="ignore", invalid="ignore"):
        det = np.einsum("...k,...k", N, c_uv)

        def solve(b0, b1, b2):
            return (b0[..., None] * c_uv + b1[..., None] * c_vn + b2[..., None] * c_nu) / det[..., None]

        x = solve(H, Hu, Hv)
        xu = solve(
            Hu - np.einsum("...k,...k", Nu, x),
            Huu - np.einsum("...k,...k", Nuu, x),
            Huv - np.einsum("...k,...k", Nuv, x),
        )
        xv = solve(
            Hv - np.einsum("...k,...k", Nv, x),
            Huv - np.einsum("...k,...k", Nuv, x),
            Hvv - np.einsum("...k,...k", Nvv, x),
        )
        D = 1 + y1**2 + y2**2
        Du = 2 * (y1 * yu[..., 0] + y2 * yu[..., 1])
        Dv = 2 * (y1 * yv[..., 0] + y2 * yv[..., 1])
        n = N / D[..., None]
        nu = Nu / D[..., None] - N * (Du / D**2)[..., None]
        nv = Nv / D[..., None] - N * (Dv / D**2)[..., None]
        h = H / D
    return FieldSamples(np.asarray(us), np.asarray(vs), x, xu, xv, n, nu, nv, h)


def _rf_grid(f, us, vs):
    """Value and both partials of a rational function on the grid."""
    Cn, Cd = coeff_matrix(f.num), coeff_matrix(f.den)
    num, den = _grid(Cn, us, vs), _grid(Cd, us, vs)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = num / den
        out = [val]
        for du, dv in ((1, 0), (0, 1)):
            nd = _grid(_der(Cn, du, dv), us, vs)
            dd = _grid(_der(Cd, du, dv), us, vs)
            out.append((nd * den - num * dd) / den**2)
    return out


def _field_samples(patch: RationalPNPatch, us, vs) -> FieldSamples:
    xs = [_rf_grid(c, us, vs) for c in patch.x_field]
    ns = [_rf_grid(c, us, vs) for c in patch.n_field]
    h = _rf_grid(patch.h_field, us, vs)[0]

    def stack(parts, k):
        return np.stack([p[k] for p in parts], axis=-1)

    return FieldSamples(
        np.asarray(us), np.asarray(vs),
        stack(xs, 0), stack(xs, 1), stack(xs, 2),
        stack(ns, 0), stack(ns, 1), stack(ns, 2), h,
    )


def sample_patch(patch: RationalPNPatch, us: Sequence[float], vs: Sequence[float],
                 route: str = "auto") -> FieldSamples:
    """Evaluate a patch on the tensor grid us x vs.

    ``route`` is "isotropic" (pointwise envelope solve from the source
    patch), "fields" (stored rational fields) or "auto".
    """
    us = np.asarray(us, dtype=float)
    vs = np.asarray(vs, dtype=float)
    if route == "auto":
        route = "isotropic" if patch.source is not None else "fields"
    if route == "isotropic":
        if patch.source is None:
            raise ValueError("patch has no isotropic source")
        return _isotropic_samples(patch.source, us, vs)
    if route == "fields":
        return _field_samples(patch, us, vs)
    raise ValueError(f"unknown route {route!r}")


def sample_isotropic(polys, us, vs) -> FieldSamples:
    """Sample the envelope of an isotropic polynomial patch without building it."""
    return _isotropic_samples(polys, np.asarray(us, float), np.asarray(vs, float))


def uniform_nodes(res: int) -> np.ndarray:
    """``res`` equispaced nodes covering [0, 1] including both ends."""
    if res < 2:
        raise ValueError("resolution must be at least 2")
    return np.linspace(0.0, 1.0, res)


def midpoint_nodes(res: int) -> np.ndarray:
    return (np.arange(res) + 0.5) / res
