"""Isotropic interpolation network: transferred points, tangent planes,
Ferguson boundary cubics and bicubically blended Coons patches."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import BivariatePolynomial, as_fraction
from .dualspace import (
    IsotropicPlane,
    IsotropicPoint,
    RationalPNPatch,
    TangentPlaneData,
    iota,
    support_value,
    tangent_plane_tau,
    to_blaschke,
    xi_patch,
)
from .errors import (
    CornerMismatchError,
    DegenerateTangentError,
    InputError,
    NorthPoleError,
    PoleProximityError,
    ZeroNormalError,
)

Vec3 = Tuple[Fraction, Fraction, Fraction]

#: default angular distance (radians) a normal must keep from (0, 0, 1)
EPS_POLE = 1e-6


def _v3(x) -> Vec3:
    t = tuple(as_fraction(c) for c in x)
    if len(t) != 3:
        raise InputError(f"expected a 3-vector, got {x!r}")
    return t


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _mul(s, a):
    return tuple(s * x for x in a)


def _dot(a, b):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


@dataclass
class HermiteGrid:
    """(m+1) x (n+1) points with associated (not necessarily unit) normals.

    ``tangent_scales[i][j]`` is the (u, v) pair of multipliers applied to the
    boundary tangent vectors at point (i, j); missing means all ones.
    """

    points: List[List[Vec3]]
    normals: List[List[Vec3]]
    tangent_scales: Optional[List[List[Tuple[Fraction, Fraction]]]] = None

    def __post_init__(self):
        self.points = [[_v3(p) for p in row] for row in self.points]
        self.normals = [[_v3(n) for n in row] for row in self.normals]
        rows = len(self.points)
        if rows < 2 or any(len(r) != len(self.points[0]) for r in self.points):
            raise InputError("points must form a rectangular array with at least 2 rows")
        if len(self.points[0]) < 2:
            raise InputError("at least 2 columns are required")
        if [len(r) for r in self.normals] != [len(r) for r in self.points]:
            raise InputError("normals and points have different shapes")
        for i, row in enumerate(self.normals):
            for j, n in enumerate(row):
                if not any(n):
                    raise ZeroNormalError(f"zero normal at {(i, j)}")
        if self.tangent_scales is not None:
            sc = [[tuple(as_fraction(s) for s in pair) for pair in row] for row in self.tangent_scales]
            if [len(r) for r in sc] != [len(r) for r in self.points] or any(
                len(p) != 2 for r in sc for p in r
            ):
                raise InputError("tangent_scales must have one (su, sv) pair per point")
            if any(s <= 0 for r in sc for p in r for s in p):
                raise InputError("tangent scales must be positive")
            self.tangent_scales = sc

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.points), len(self.points[0])

    def scales(self, i: int, j: int) -> Tuple[Fraction, Fraction]:
        if self.tangent_scales is None:
            return (Fraction(1), Fraction(1))
        return self.tangent_scales[i][j]

    def with_scales(self, scales) -> "HermiteGrid":
        return replace(self, tangent_scales=scales)

    def pole_violations(self, eps: float = EPS_POLE) -> List[Tuple[int, int]]:
        """Indices whose unit normal is within ``eps`` radians of (0, 0, 1)."""
        bad = []
        for i, row in enumerate(self.normals):
            for j, n in enumerate(row):
                f = [float(c) for c in n]
                norm = math.sqrt(sum(c * c for c in f))
                ang = math.acos(max(-1.0, min(1.0, f[2] / norm)))
                if ang < eps or (n[0] == 0 and n[1] == 0 and n[2] > 0):
                    bad.append((i, j))
        return bad

    def check_pole(self, eps: float = EPS_POLE) -> None:
        bad = self.pole_violations(eps)
        if bad:
            raise PoleProximityError(bad, eps)


@dataclass
class IsotropicNet:
    points: List[List[IsotropicPoint]]
    planes: List[List[IsotropicPlane]]
    tangent_data: List[List[TangentPlaneData]]
    tu: Optional[List[List[Vec3]]] = None
    tv: Optional[List[List[Vec3]]] = None

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.points), len(self.points[0])


def project(w: Sequence, tau: IsotropicPlane) -> Vec3:
    """Orthogonal projection of w onto the plane direction space of tau."""
    w = _v3(w)
    m = tau.m
    return _sub(w, _mul(_dot(w, m) / _dot(m, m), m))


def _transfer(grid: HermiteGrid):
    rows, cols = grid.shape
    pts, planes, tdata = [], [], []
    for i in range(rows):
        prow, plrow, trow = [], [], []
        for j in range(cols):
            tp = support_value(grid.points[i][j], grid.normals[i][j])
            try:
                a = iota(to_blaschke(tp))
            except NorthPoleError as exc:
                raise NorthPoleError(index=(i, j)) from exc
            prow.append(a)
            plrow.append(tangent_plane_tau(a, grid.points[i][j]))
            trow.append(tp)
        pts.append(prow)
        planes.append(plrow)
        tdata.append(trow)
    return pts, planes, tdata


def difference_vectors(points, i: int, j: int) -> Tuple[Vec3, Vec3]:
    """Unprojected boundary tangent candidates at (i, j).

    Central differences inside, doubled one-sided differences on the border.
    """
    rows, cols = len(points), len(points[0])
    a = points
    if i == 0:
        du = _mul(2, _sub(a[1][j], a[0][j]))
    elif i == rows - 1:
        du = _mul(2, _sub(a[i][j], a[i - 1][j]))
    else:
        du = _sub(a[i + 1][j], a[i - 1][j])
    if j == 0:
        dv = _mul(2, _sub(a[i][1], a[i][0]))
    elif j == cols - 1:
        dv = _mul(2, _sub(a[i][j], a[i][j - 1]))
    else:
        dv = _sub(a[i][j + 1], a[i][j - 1])
    return du, dv


def tangent_vectors(net: IsotropicNet, scales=None) -> IsotropicNet:
    """Fill in tu, tv by projecting difference vectors into each tau plane."""
    rows, cols = net.shape
    tu, tv = [], []
    for i in range(rows):
        urow, vrow = [], []
        for j in range(cols):
            du, dv = difference_vectors(net.points, i, j)
            su, sv = (Fraction(1), Fraction(1)) if scales is None else scales(i, j)
            pu = _mul(su, project(du, net.planes[i][j]))
            pv = _mul(sv, project(dv, net.planes[i][j]))
            if not any(pu) or not any(pv):
                raise DegenerateTangentError(f"projected tangent vanishes at {(i, j)}")
            urow.append(pu)
            vrow.append(pv)
        tu.append(urow)
        tv.append(vrow)
    return replace(net, tu=tu, tv=tv)


def build_isotropic_net(grid: HermiteGrid) -> IsotropicNet:
    pts, planes, tdata = _transfer(grid)
    net = IsotropicNet(pts, planes, tdata)
    return tangent_vectors(net, grid.scales)


# --- curves and patches ------------------------------------------------------


def hermite_basis(t):
    """Cubic Hermite basis (H0, H1, G0, G1) at t."""
    t2 = t * t
    t3 = t2 * t
    return (2 * t3 - 3 * t2 + 1, -2 * t3 + 3 * t2, t3 - 2 * t2 + t, t3 - t2)


@dataclass(frozen=True)
class FergusonCurve:
    """Cubic with c(0)=a0, c(1)=a1, c'(0)=t0, c'(1)=t1 on t in [0, 1]."""

    a0: Vec3
    t0: Vec3
    a1: Vec3
    t1: Vec3

    @property
    def coefficients(self) -> Tuple[Vec3, Vec3, Vec3, Vec3]:
        """Power-basis coefficients (c0, c1, c2, c3) of c(t) = sum c_k t^k."""
        a0, t0, a1, t1 = self.a0, self.t0, self.a1, self.t1
        d = _sub(a1, a0)
        c2 = _sub(_sub(_mul(3, d), _mul(2, t0)), t1)
        c3 = _add(_add(_mul(-2, d), t0), t1)
        return (a0, t0, c2, c3)

    def __call__(self, t) -> Vec3:
        t = as_fraction(t)
        h0, h1, g0, g1 = hermite_basis(t)
        return tuple(
            h0 * p + h1 * q + g0 * r + g1 * s
            for p, q, r, s in zip(self.a0, self.a1, self.t0, self.t1)
        )

    def derivative(self, t) -> Vec3:
        t = as_fraction(t)
        c = self.coefficients
        return tuple(c[1][k] + 2 * c[2][k] * t + 3 * c[3][k] * t * t for k in range(3))

    def polynomials(self, var: str = "u") -> Tuple[BivariatePolynomial, ...]:
        c = self.coefficients
        return tuple(BivariatePolynomial.univariate([c[p][k] for p in range(4)], var) for k in range(3))


def ferguson(a0, t0, a1, t1) -> FergusonCurve:
    return FergusonCurve(_v3(a0), _v3(t0), _v3(a1), _v3(t1))


_F0 = BivariatePolynomial.univariate([1, 0, -3, 2], "u")
_F1 = BivariatePolynomial.univariate([0, 0, 3, -2], "u")
_G0 = BivariatePolynomial.univariate([1, 0, -3, 2], "v")
_G1 = BivariatePolynomial.univariate([0, 0, 3, -2], "v")


@dataclass(frozen=True)
class CoonsPatch:
    """Bicubic Coons patch stored as a 4x4 tensor of power-basis 3-vectors.

    ``tensor[i][j]`` is the coefficient of u^i v^j.
    """

    tensor: Tuple[Tuple[Vec3, ...], ...]
    c0: FergusonCurve
    c1: FergusonCurve
    d0: FergusonCurve
    d1: FergusonCurve
    cell: Optional[Tuple[int, int]] = None

    @property
    def corners(self) -> Dict[Tuple[int, int], Vec3]:
        return {(0, 0): self.c0.a0, (1, 0): self.c0.a1, (0, 1): self.c1.a0, (1, 1): self.c1.a1}

    def polynomials(self) -> Tuple[BivariatePolynomial, BivariatePolynomial, BivariatePolynomial]:
        return tuple(
            BivariatePolynomial(
                {(i, j): self.tensor[i][j][k] for i in range(4) for j in range(4)}
            )
            for k in range(3)
        )

    def __call__(self, u, v) -> Vec3:
        u, v = as_fraction(u), as_fraction(v)
        up = [u**i for i in range(4)]
        vp = [v**j for j in range(4)]
        return tuple(
            sum((self.tensor[i][j][k] * up[i] * vp[j] for i in range(4) for j in range(4)), Fraction(0))
            for k in range(3)
        )


def coons(c0: FergusonCurve, c1: FergusonCurve, d0: FergusonCurve, d1: FergusonCurve,
          cell=None) -> CoonsPatch:
    """Bicubically blended Coons patch of four boundary cubics.

    c0, c1 are the v=0 and v=1 boundaries (parameter u); d0, d1 the u=0 and
    u=1 boundaries (parameter v).
    """
    a00, a10, a01, a11 = c0.a0, c0.a1, c1.a0, c1.a1
    if d0.a0 != a00 or d1.a0 != a10 or d0.a1 != a01 or d1.a1 != a11:
        raise CornerMismatchError("boundary curves do not meet at common corners")
    pc0, pc1 = c0.polynomials("u"), c1.polynomials("u")
    pd0, pd1 = d0.polynomials("v"), d1.polynomials("v")
    comps = []
    for k in range(3):
        y = (
            _G0 * pc0[k] + _G1 * pc1[k] + _F0 * pd0[k] + _F1 * pd1[k]
            - _F0 * _G0 * a00[k] - _F1 * _G0 * a10[k]
            - _F0 * _G1 * a01[k] - _F1 * _G1 * a11[k]
        )
        comps.append(y)
    tensor = tuple(
        tuple(tuple(comps[k].coeff(i, j) for k in range(3)) for j in range(4))
        for i in range(4)
    )
    return CoonsPatch(tensor, c0, c1, d0, d1, cell)


@dataclass
class PatchNetwork:
    """All boundary cubics and Coons patches of a grid.

    ``u_curves[i][j]`` joins a[i][j] to a[i+1][j]; ``v_curves[i][j]`` joins
    a[i][j] to a[i][j+1]. Patch (i, j) spans the cell with corners a[i][j]
    and a[i+1][j+1]; neighbours hold the very same curve objects on their
    common edge.
    """

    net: IsotropicNet
    u_curves: List[List[FergusonCurve]]
    v_curves: List[List[FergusonCurve]]
    patches: Dict[Tuple[int, int], CoonsPatch] = field(default_factory=dict)

    @property
    def ferguson_count(self) -> int:
        return sum(map(len, self.u_curves)) + sum(map(len, self.v_curves))

    @property
    def cells(self) -> List[Tuple[int, int]]:
        return sorted(self.patches)

    def shared_curves(self) -> List[Tuple[str, Tuple[int, int]]]:
        """Edges bounding two patches, as ("u"|"v", curve index)."""
        rows, cols = self.net.shape
        out = [("u", (i, j)) for i in range(rows - 1) for j in range(1, cols - 1)]
        out += [("v", (i, j)) for i in range(1, rows - 1) for j in range(cols - 1)]
        return out


def assemble_network(grid: HermiteGrid) -> PatchNetwork:
    net = build_isotropic_net(grid)
    rows, cols = net.shape
    a = net.points
    u_curves = [
        [ferguson(a[i][j], net.tu[i][j], a[i + 1][j], net.tu[i + 1][j]) for j in range(cols)]
        for i in range(rows - 1)
    ]
    v_curves = [
        [ferguson(a[i][j], net.tv[i][j], a[i][j + 1], net.tv[i][j + 1]) for j in range(cols - 1)]
        for i in range(rows)
    ]
    network = PatchNetwork(net, u_curves, v_curves)
    for i in range(rows - 1):
        for j in range(cols - 1):
            try:
                network.patches[(i, j)] = coons(
                    u_curves[i][j], u_curves[i][j + 1], v_curves[i][j], v_curves[i + 1][j], cell=(i, j)
                )
            except CornerMismatchError as exc:
                raise CornerMismatchError(f"cell {(i, j)}: {exc}") from exc
    return network


def patch_label(cell: Tuple[int, int]) -> str:
    return f"patch_{cell[0]}_{cell[1]}"


def interpolate(grid: HermiteGrid) -> Tuple[PatchNetwork, Dict[Tuple[int, int], RationalPNPatch]]:
    """Isotropic network plus the primal PN patch of every cell."""
    network = assemble_network(grid)
    patches = {
        cell: xi_patch(network.patches[cell].polynomials(), label=patch_label(cell))
        for cell in network.cells
    }
    for cell, p in patches.items():
        p.meta["cell"] = f"{cell[0]},{cell[1]}"
    return network, patches
