"""Curvature diagnostics through the radius-of-curvature matrix.

For a surface given by its support function, dx = (Hess h + h I) dn on the
tangent plane of the sphere. The matrix M = Hess h + h I is the inverse of
the shape operator: det M = 1 / K, and a vanishing det M or an eigenvalue
changing sign marks a sharp edge of the envelope.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..dualspace import RationalPNPatch
from .sampling import FieldSamples, midpoint_nodes, sample_isotropic, sample_patch, uniform_nodes

#: default ridge threshold, relative to the median |det M| of the patch
EPS_RIDGE = 1e-6
#: default sampling resolution per parameter direction
RESOLUTION = 33


@dataclass(frozen=True)
class CurvatureSample:
    u: float
    v: float
    detM: float
    eigenvalues: Tuple[float, float]
    gaussK: float
    degenerate: bool = False


@dataclass
class CurvatureGrid:
    """Curvature quantities on a res x res grid (arrays indexed [iu, iv])."""

    us: np.ndarray
    vs: np.ndarray
    detM: np.ndarray
    eig: np.ndarray  # (nu, nv, 2), ascending
    gaussK: np.ndarray
    degenerate: np.ndarray
    patch_id: str = ""

    def samples(self) -> List[CurvatureSample]:
        out = []
        for a, u in enumerate(self.us):
            for b, v in enumerate(self.vs):
                out.append(
                    CurvatureSample(
                        float(u), float(v), float(self.detM[a, b]),
                        (float(self.eig[a, b, 0]), float(self.eig[a, b, 1])),
                        float(self.gaussK[a, b]), bool(self.degenerate[a, b]),
                    )
                )
        return out


def _tangent_basis(n: np.ndarray, seed: np.ndarray):
    e1 = seed - n * np.einsum("...k,...k", seed, n)[..., None]
    norm = np.linalg.norm(e1, axis=-1)
    fallback = np.cross(n, np.array([1.0, 0.0, 0.0]))
    bad = norm < 1e-12
    if np.any(bad):
        e1[bad] = fallback[bad]
        norm[bad] = np.linalg.norm(e1[bad], axis=-1)
    e1 = e1 / norm[..., None]
    e2 = np.cross(n, e1)
    return e1, e2


def curvature_from_samples(s: FieldSamples, patch_id: str = "") -> CurvatureGrid:
    """Ratio formula det M = n.(x_u x x_v) / n.(n_u x n_v) plus M's eigenvalues."""
    n = s.n / np.linalg.norm(s.n, axis=-1)[..., None]
    with np.errstate(divide="ignore", invalid="ignore"):
        num = np.einsum("...k,...k", n, np.cross(s.xu, s.xv))
        den = np.einsum("...k,...k", n, np.cross(s.nu, s.nv))
        detM = num / den
        e1, e2 = _tangent_basis(n, np.nan_to_num(s.nu))
        A = np.stack(
            [
                np.stack([np.einsum("...k,...k", e1, s.xu), np.einsum("...k,...k", e1, s.xv)], -1),
                np.stack([np.einsum("...k,...k", e2, s.xu), np.einsum("...k,...k", e2, s.xv)], -1),
            ],
            -2,
        )
        B = np.stack(
            [
                np.stack([np.einsum("...k,...k", e1, s.nu), np.einsum("...k,...k", e1, s.nv)], -1),
                np.stack([np.einsum("...k,...k", e2, s.nu), np.einsum("...k,...k", e2, s.nv)], -1),
            ],
            -2,
        )
        degenerate = ~np.isfinite(detM) | (den == 0) | ~s.finite
        Bsafe = np.where(degenerate[..., None, None], np.eye(2), B)
        Asafe = np.where(degenerate[..., None, None], np.eye(2), A)
        M = Asafe @ np.linalg.inv(Bsafe)
        # M is self-adjoint up to rounding
        M = 0.5 * (M + np.swapaxes(M, -1, -2))
        eig = np.linalg.eigvalsh(M)
        eig[degenerate] = np.nan
        detM = np.where(degenerate, np.nan, detM)
        gaussK = 1.0 / detM
    return CurvatureGrid(s.us, s.vs, detM, eig, gaussK, degenerate, patch_id)


def curvature_analysis(patch: RationalPNPatch, resolution: int = RESOLUTION,
                       route: str = "auto") -> CurvatureGrid:
    nodes = uniform_nodes(resolution)
    return curvature_from_samples(sample_patch(patch, nodes, nodes, route), patch.label)


@dataclass
class RidgeReport:
    patch_id: str
    flags: List[Tuple[float, float, str]] = field(default_factory=list)
    threshold: float = 0.0

    @property
    def verdict(self) -> str:
        return "ridge detected" if self.flags else "no ridge detected at this resolution"

    @property
    def ok(self) -> bool:
        return not self.flags

    def as_dict(self) -> dict:
        return {
            "patch": self.patch_id,
            "verdict": self.verdict,
            "threshold": self.threshold,
            "flags": [{"u": u, "v": v, "reason": r} for u, v, r in self.flags],
        }


def ridge_detect(grid: CurvatureGrid, eps_ridge: float = EPS_RIDGE) -> RidgeReport:
    """Flag near-zero det M and eigenvalue sign changes between 4-neighbours."""
    detM = grid.detM
    finite = np.isfinite(detM)
    med = float(np.median(np.abs(detM[finite]))) if finite.any() else 0.0
    thr = eps_ridge * med
    flags = []
    nu, nv = detM.shape
    for a in range(nu):
        for b in range(nv):
            u, v = float(grid.us[a]), float(grid.vs[b])
            if grid.degenerate[a, b]:
                flags.append((u, v, "degenerate"))
            elif abs(detM[a, b]) < thr:
                flags.append((u, v, "small det"))
    sg = np.sign(grid.eig)
    for axis in (0, 1):
        s0 = sg[:-1] if axis == 0 else sg[:, :-1]
        s1 = sg[1:] if axis == 0 else sg[:, 1:]
        change = np.any((s0 * s1) < 0, axis=-1)
        for a, b in zip(*np.nonzero(change)):
            flags.append((float(grid.us[a]), float(grid.vs[b]), f"eigenvalue sign change ({'uv'[axis]})"))
    return RidgeReport(grid.patch_id, flags, thr)


@dataclass(frozen=True)
class ObjectiveValue:
    value: float
    nonfinite: int
    samples: int

    @property
    def finite(self) -> bool:
        return self.nonfinite == 0


def _objective_terms(s: FieldSamples):
    n = s.n / np.linalg.norm(s.n, axis=-1)[..., None]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        cn = np.cross(s.nu, s.nv)
        area = np.linalg.norm(cn, axis=-1)
        detM = np.einsum("...k,...k", n, np.cross(s.xu, s.xv)) / np.einsum("...k,...k", n, cn)
        return area / detM**2


def objective_from_samples(samples: Iterable[FieldSamples], res: int) -> ObjectiveValue:
    total, bad, count = 0.0, 0, 0
    for s in samples:
        t = _objective_terms(s)
        ok = np.isfinite(t)
        bad += int((~ok).sum())
        count += t.size
        total += float(t[ok].sum()) / res**2
    return ObjectiveValue(total if bad == 0 else float("inf"), bad, count)


def objective(patches: Sequence[RationalPNPatch], resolution: int = 24,
              route: str = "auto") -> ObjectiveValue:
    """Midpoint-rule integral of K^2 over the Gauss image, summed over patches.

    dA on the sphere is |n_u x n_v| du dv. Non-finite integrand values make
    the result infinite and are counted, never dropped.
    """
    nodes = midpoint_nodes(resolution)
    return objective_from_samples((sample_patch(p, nodes, nodes, route) for p in patches), resolution)


def objective_isotropic(polys_list, resolution: int = 24) -> ObjectiveValue:
    nodes = midpoint_nodes(resolution)
    return objective_from_samples((sample_isotropic(p, nodes, nodes) for p in polys_list), resolution)
