"""Offsets and cross-patch continuity checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Tuple

from ..algebra import RationalVec3Field, as_fraction
from ..dualspace import RationalPNPatch
from ..errors import NonAdjacentError, PoleError


def offset(patch: RationalPNPatch, d, side: str | int = "+") -> RationalPNPatch:
    """One-sided offset at signed distance +-d.

    Adds d to the support function; the point field becomes x + d n, which
    stays rational because n is a rational unit field.
    """
    d = as_fraction(d)
    sgn = _side(side)
    sd = sgn * d
    if sd == 0:
        return patch
    X, dx = patch.x_field.common_denominator()
    N, dn = patch.n_field.common_denominator()
    q = dx.exact_divide(dn)
    if q is not None:
        # keep the point denominator: for envelopes it is a multiple of |N|
        x = RationalVec3Field.from_polynomials([a + b * q * sd for a, b in zip(X, N)], dx)
    else:
        x = patch.x_field + patch.n_field.scale(sd)
    h = patch.h_field + sd
    source = None
    if patch.source is not None:
        y1, y2, y3 = patch.source
        source = (y1, y2, y3 + (1 + y1 * y1 + y2 * y2) * (sd / 2))
    label = f"{patch.label}{'+' if sd > 0 else '-'}{abs(d)}" if patch.label else ""
    return RationalPNPatch(patch.n_field, h, x, source=source, label=label,
                           meta={**patch.meta, "offset": str(sd)})


def _side(side) -> int:
    if side in ("+", "plus", 1, +1):
        return 1
    if side in ("-", "minus", -1):
        return -1
    raise ValueError(f"side must be plus or minus, not {side!r}")


# edge name of patch a -> (parameter map on a, parameter map on b)
_EDGES = {
    "u1": (lambda t: (Fraction(1), t), lambda t: (Fraction(0), t)),
    "u0": (lambda t: (Fraction(0), t), lambda t: (Fraction(1), t)),
    "v1": (lambda t: (t, Fraction(1)), lambda t: (t, Fraction(0))),
    "v0": (lambda t: (t, Fraction(0)), lambda t: (t, Fraction(1))),
}


@dataclass
class ContinuityReport:
    edge: str
    samples: int
    exact_positions: bool
    exact_normals: bool
    max_position_deviation: float
    max_normal_angle: float
    tol: float
    poles: List[Fraction] = field(default_factory=list)
    label: str = ""

    @property
    def passed(self) -> bool:
        return (
            self.max_position_deviation < self.tol or self.exact_positions
        ) and (self.max_normal_angle < self.tol or self.exact_normals) and not self.poles

    def as_dict(self) -> dict:
        return {
            "edge": self.label or self.edge,
            "samples": self.samples,
            "exact_positions": self.exact_positions,
            "exact_normals": self.exact_normals,
            "max_position_deviation": self.max_position_deviation,
            "max_normal_angle": self.max_normal_angle,
            "tol": self.tol,
            "poles": [str(t) for t in self.poles],
            "passed": self.passed,
        }


def _angle(a, b) -> float:
    fa = [float(c) for c in a]
    fb = [float(c) for c in b]
    na = math.sqrt(sum(c * c for c in fa))
    nb = math.sqrt(sum(c * c for c in fb))
    cr = (
        fa[1] * fb[2] - fa[2] * fb[1],
        fa[2] * fb[0] - fa[0] * fb[2],
        fa[0] * fb[1] - fa[1] * fb[0],
    )
    s = math.sqrt(sum(c * c for c in cr)) / (na * nb)
    c = sum(x * y for x, y in zip(fa, fb)) / (na * nb)
    return math.atan2(s, c)


def g1_check(pa: RationalPNPatch, pb: RationalPNPatch, edge: str = "v1",
             samples: int = 101, tol: float = 1e-12) -> ContinuityReport:
    """Compare positions and unit normals along the common edge.

    ``edge`` names the side of ``pa`` ("u0", "u1", "v0", "v1"); ``pb`` is
    matched on the opposite side. Parameters t = k / (samples - 1) are exact
    rationals, so positions are compared exactly.
    """
    if edge not in _EDGES:
        raise ValueError(f"edge must be one of {sorted(_EDGES)}")
    if samples < 2:
        raise ValueError("need at least two samples")
    ma, mb = _EDGES[edge]
    for t in (Fraction(0), Fraction(1)):
        try:
            xa, xb = pa.point(*ma(t)), pb.point(*mb(t))
        except PoleError:
            continue
        if max(abs(float(p - q)) for p, q in zip(xa, xb)) > max(tol, 1e-9):
            raise NonAdjacentError(f"patches do not share edge {edge}: endpoint {t} differs")
    exact_pos = exact_nrm = True
    max_dev = max_ang = 0.0
    poles = []
    for k in range(samples):
        t = Fraction(k, samples - 1)
        try:
            xa, xb = pa.point(*ma(t)), pb.point(*mb(t))
            na, nb = pa.normal(*ma(t)), pb.normal(*mb(t))
        except PoleError:
            poles.append(t)
            continue
        if xa != xb:
            exact_pos = False
            max_dev = max(max_dev, math.sqrt(sum(float(p - q) ** 2 for p, q in zip(xa, xb))))
        if na != nb:
            exact_nrm = False
            max_ang = max(max_ang, _angle(na, nb))
    return ContinuityReport(edge, samples, exact_pos, exact_nrm, max_dev, max_ang, tol, poles)


def network_edges(cells) -> List[Tuple[Tuple[int, int], Tuple[int, int], str]]:
    """All interior edges of a patch network keyed by cell index."""
    cells = set(cells)
    out = []
    for (i, j) in sorted(cells):
        if (i + 1, j) in cells:
            out.append(((i, j), (i + 1, j), "u1"))
        if (i, j + 1) in cells:
            out.append(((i, j), (i, j + 1), "v1"))
    return out
