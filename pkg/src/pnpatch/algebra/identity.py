"""Polynomial identity testing by exact evaluation on tensor grids.

A polynomial of bidegree at most (d1, d2) vanishes identically iff it vanishes
on S1 x S2 for any sets of distinct nodes with |S1| > d1, |S2| > d2. Callers
describe an expression over named polynomial leaves as a plain Python
function; it is run twice, first over :class:`DegreeBound` proxies to size
the grid, then over :class:`ScaledGrid` arrays holding exact integer values
at every node. The expanded polynomial is never formed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from .polynomial import BivariatePolynomial


class DegreeBound:
    """Bidegree upper bound that propagates through +, -, *."""

    __slots__ = ("du", "dv")

    def __init__(self, du: int, dv: int):
        self.du, self.dv = du, dv

    @classmethod
    def of(cls, p: BivariatePolynomial) -> "DegreeBound":
        bd = p.bidegree or (0, 0)
        return cls(*bd)

    def _other(self, o):
        if isinstance(o, DegreeBound):
            return o
        if isinstance(o, (int, Fraction)):
            return DegreeBound(0, 0)
        return NotImplemented

    def __add__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return DegreeBound(max(self.du, o.du), max(self.dv, o.dv))

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return DegreeBound(self.du + o.du, self.dv + o.dv)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return DegreeBound(self.du * k, self.dv * k)

    def __repr__(self):
        return f"DegreeBound({self.du}, {self.dv})"


class ScaledGrid:
    """Exact values on a grid stored as integer array times a rational scale."""

    __slots__ = ("values", "scale")

    def __init__(self, values: np.ndarray, scale: Fraction = Fraction(1)):
        self.values = values
        self.scale = Fraction(scale)

    def _combine(self, o, sign: int):
        if isinstance(o, (int, Fraction)):
            o = ScaledGrid(np.full(self.values.shape, 1, dtype=object), Fraction(o))
        if not isinstance(o, ScaledGrid):
            return NotImplemented
        a, b = self.scale, o.scale
        da, db = a.denominator, b.denominator
        return ScaledGrid(
            self.values * (a.numerator * db) + o.values * (sign * b.numerator * da),
            Fraction(1, da * db),
        )

    def __add__(self, o):
        return self._combine(o, 1)

    __radd__ = __add__

    def __sub__(self, o):
        return self._combine(o, -1)

    def __rsub__(self, o):
        return (-self)._combine(o, 1)

    def __neg__(self):
        return ScaledGrid(self.values, -self.scale)

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            return ScaledGrid(self.values, self.scale * o)
        if not isinstance(o, ScaledGrid):
            return NotImplemented
        return ScaledGrid(self.values * o.values, self.scale * o.scale)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return ScaledGrid(self.values**k, self.scale**k)

    def nonzero_index(self) -> Optional[Tuple[int, int]]:
        if self.scale == 0:
            return None
        nz = np.flatnonzero(self.values != 0)
        if nz.size == 0:
            return None
        return tuple(int(x) for x in np.unravel_index(nz[0], self.values.shape))


def centered_nodes(count: int) -> list:
    """``count`` distinct integers centred on zero (keeps powers small)."""
    lo = -(count // 2)
    return list(range(lo, lo + count))


def _powers(nodes: Sequence[int], deg: int) -> np.ndarray:
    out = np.empty((len(nodes), deg + 1), dtype=object)
    for a, t in enumerate(nodes):
        acc = 1
        for k in range(deg + 1):
            out[a, k] = acc
            acc *= t
    return out


def grid_values(p: BivariatePolynomial, us: Sequence[int], vs: Sequence[int]) -> ScaledGrid:
    """Exact values of p on the integer tensor grid us x vs."""
    if p.is_zero():
        return ScaledGrid(np.zeros((len(us), len(vs)), dtype=object), Fraction(0))
    s = p.denominator_lcm()
    du, dv = p.bidegree
    C = np.zeros((du + 1, dv + 1), dtype=object)
    for (i, j), a in p.integer_coeffs(s).items():
        C[i, j] = a
    vals = _powers(us, du).dot(C).dot(_powers(vs, dv).T)
    return ScaledGrid(vals, Fraction(1, s))


@dataclass(frozen=True)
class IdentityCheck:
    """Outcome of a grid identity test."""

    holds: bool
    bound: Tuple[int, int]
    grid_shape: Tuple[int, int]
    witness: Optional[Tuple[int, int]] = None
    residual: Optional[Fraction] = None

    @property
    def nodes(self) -> int:
        return self.grid_shape[0] * self.grid_shape[1]


def vanishes_identically(
    expr: Callable[[Mapping[str, object]], object],
    leaves: Mapping[str, BivariatePolynomial],
) -> IdentityCheck:
    """Decide whether ``expr(leaves)`` is the zero polynomial.

    ``expr`` must only use +, -, *, integer powers and rational constants on
    its arguments. The grid is sized from the propagated bidegree bound, so a
    positive answer is a proof, not a probabilistic statement.
    """
    bound = expr({k: DegreeBound.of(p) for k, p in leaves.items()})
    if not isinstance(bound, DegreeBound):
        # expression reduced to a constant
        bound = DegreeBound(0, 0)
    us = centered_nodes(bound.du + 1)
    vs = centered_nodes(bound.dv + 1)
    cache: Dict[BivariatePolynomial, ScaledGrid] = {}
    grids = {}
    for k, p in leaves.items():
        if p not in cache:
            cache[p] = grid_values(p, us, vs)
        grids[k] = cache[p]
    result = expr(grids)
    if isinstance(result, (int, Fraction)):
        return IdentityCheck(result == 0, (0, 0), (1, 1))
    idx = result.nonzero_index()
    shape = (len(us), len(vs))
    if idx is None:
        return IdentityCheck(True, (bound.du, bound.dv), shape)
    return IdentityCheck(
        False,
        (bound.du, bound.dv),
        shape,
        witness=(us[idx[0]], vs[idx[1]]),
        residual=result.values[idx] * result.scale,
    )


def rational_identity(a, b) -> IdentityCheck:
    """Test a == b for two BivariateRationalFunctions via num_a*den_b - num_b*den_a."""
    leaves = {"na": a.num, "da": a.den, "nb": b.num, "db": b.den}
    return vanishes_identically(lambda L: L["na"] * L["db"] - L["nb"] * L["da"], leaves)
