"""Exact certification of the Pythagorean-normal property."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

from ..algebra import BivariatePolynomial, vanishes_identically
from ..algebra.identity import IdentityCheck
from ..dualspace import RationalPNPatch


def _cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


@dataclass(frozen=True)
class PNCertificate:
    patch_id: str
    degree_bound: Tuple[int, int]
    grid_shape: Tuple[int, int]
    verdict: str  # "exact-PN" or "failed"
    unit_normal: bool
    witness: Optional[Tuple[int, int]] = None
    residual: Optional[Fraction] = None
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.verdict == "exact-PN"

    def as_dict(self) -> dict:
        return {
            "patch": self.patch_id,
            "verdict": self.verdict,
            "degree_bound": list(self.degree_bound),
            "grid_shape": list(self.grid_shape),
            "unit_normal": self.unit_normal,
            "witness": None if self.witness is None else [str(c) for c in self.witness],
            "residual": None if self.residual is None else str(self.residual),
        }


def _leaves(patch: RationalPNPatch):
    X, dx = patch.x_field.common_denominator()
    N, dn = patch.n_field.common_denominator()
    leaves = {f"X{k}": X[k] for k in range(3)}
    leaves.update({f"Xu{k}": X[k].diff("u") for k in range(3)})
    leaves.update({f"Xv{k}": X[k].diff("v") for k in range(3)})
    leaves.update({"Dx": dx, "Dxu": dx.diff("u"), "Dxv": dx.diff("v")})
    leaves.update({f"N{k}": N[k] for k in range(3)})
    leaves["Dn"] = dn
    return leaves


def _reduced_normal(L):
    """x_u x x_v times Dx^3, with x = X / Dx.

    (X_u Dx - X Dx_u) x (X_v Dx - X Dx_v) = Dx * W with
    W = Dx (X_u x X_v) - Dx_v (X_u x X) - Dx_u (X x X_v).
    """
    X = (L["X0"], L["X1"], L["X2"])
    Xu = (L["Xu0"], L["Xu1"], L["Xu2"])
    Xv = (L["Xv0"], L["Xv1"], L["Xv2"])
    d, du, dv = L["Dx"], L["Dxu"], L["Dxv"]
    a = _cross(Xu, Xv)
    b = _cross(Xu, X)
    c = _cross(X, Xv)
    return tuple(d * a[k] - dv * b[k] - du * c[k] for k in range(3))


def pn_identity(L):
    """|W|^2 Dn^2 - (W . N)^2, i.e. the PN residual with denominators cleared.

    With w = x_u x x_v = W / Dx^3 and n = N / Dn this is
    (|w|^2 - (w . n)^2) * Dx^6 * Dn^2.
    """
    W = _reduced_normal(L)
    N = (L["N0"], L["N1"], L["N2"])
    s = _dot(W, N)
    return _dot(W, W) * L["Dn"] * L["Dn"] - s * s


def unit_identity(L):
    N = (L["N0"], L["N1"], L["N2"])
    return _dot(N, N) - L["Dn"] * L["Dn"]


def parallel_identity_components(L):
    W = _reduced_normal(L)
    N = (L["N0"], L["N1"], L["N2"])
    return _cross(W, N)


def pn_verify(patch: RationalPNPatch, patch_id: str = "") -> PNCertificate:
    """Certify |x_u x x_v|^2 == ((x_u x x_v) . n)^2 exactly, with |n| == 1.

    Both identities are decided by evaluation on integer grids sized from
    the stored bidegrees, which is a complete test.
    """
    leaves = _leaves(patch)
    unit = vanishes_identically(unit_identity, leaves)
    pn = vanishes_identically(pn_identity, leaves)
    ok = unit.holds and pn.holds
    witness, residual = pn.witness, pn.residual
    if not unit.holds and witness is None:
        witness, residual = unit.witness, unit.residual
    return PNCertificate(
        patch_id or patch.label,
        pn.bound,
        pn.grid_shape,
        "exact-PN" if ok else "failed",
        unit.holds,
        witness,
        residual,
        {"pn": pn, "unit": unit},
    )


def normal_parallel_check(patch: RationalPNPatch) -> IdentityCheck:
    """cross(x_u x x_v, n) == 0 as a rational identity (all three components)."""
    leaves = _leaves(patch)
    for k in range(3):
        res = vanishes_identically(lambda L, k=k: parallel_identity_components(L)[k], leaves)
        if not res.holds:
            return res
    return res


def envelope_checks(patch: RationalPNPatch) -> dict:
    """n.x - h, n_u.x - h_u, n_v.x - h_v, each decided as an exact identity."""
    out = {}
    n, h, x = patch.n_field, patch.h_field, patch.x_field
    X, dx = x.common_denominator()
    for name, nf, hf in (
        ("position", n, h),
        ("d/du", n.diff("u"), h.diff("u")),
        ("d/dv", n.diff("v"), h.diff("v")),
    ):
        N, dn = nf.common_denominator()
        leaves = {"X0": X[0], "X1": X[1], "X2": X[2], "dx": dx,
                  "N0": N[0], "N1": N[1], "N2": N[2], "dn": dn,
                  "hn": hf.num, "hd": hf.den}
        out[name] = vanishes_identically(
            lambda L: (L["N0"] * L["X0"] + L["N1"] * L["X1"] + L["N2"] * L["X2"]) * L["hd"]
            - L["hn"] * L["dn"] * L["dx"],
            leaves,
        )
    return out


def unit_normal_check(patch: RationalPNPatch) -> IdentityCheck:
    N, dn = patch.n_field.common_denominator()
    return vanishes_identically(unit_identity, {"N0": N[0], "N1": N[1], "N2": N[2], "Dn": dn})
