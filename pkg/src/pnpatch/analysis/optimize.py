"""Derivative-free tuning of the boundary tangent lengths.

The objective integrates K^2 over each patch's Gauss image, so it blows up
wherever the envelope develops a sharp edge. Each evaluation rebuilds the
isotropic network exactly and samples the envelope numerically; no symbolic
pull-back is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Tuple

from ..errors import DegeneracyError
from ..patchwork import HermiteGrid, assemble_network
from .curvature import objective_isotropic

GOLDEN = (math.sqrt(5) - 1) / 2
#: denominators of trial scales are capped to keep the exact network small
SCALE_DENOMINATOR = 10**6


@dataclass
class OptimizationResult:
    scales: List[List[Tuple[Fraction, Fraction]]]
    objective_before: float
    objective_after: float
    evaluations: int
    budget_exhausted: bool
    history: List[float] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "scales": [[[str(a), str(b)] for a, b in row] for row in self.scales],
            "objective_before": self.objective_before,
            "objective_after": self.objective_after,
            "evaluations": self.evaluations,
            "budget_exhausted": self.budget_exhausted,
        }


class _Budget(Exception):
    pass


def grid_objective(grid: HermiteGrid, resolution: int = 24) -> float:
    try:
        network = assemble_network(grid)
    except DegeneracyError:
        return math.inf
    polys = [network.patches[c].polynomials() for c in network.cells]
    return objective_isotropic(polys, resolution).value


def optimize_scales(grid: HermiteGrid, bounds=(0.25, 2.0), budget: int = 200,
                    resolution: int = 24, line_steps: int = 8,
                    scan: int = 12) -> OptimizationResult:
    """Minimize the K^2 objective over per-point (su, sv) tangent scales.

    A log-spaced scan plus golden-section refinement of a common multiplier
    of all scales comes first, then cyclic coordinate descent with
    golden-section line searches. A trial point is only accepted if it
    strictly improves the incumbent, so the objective never increases. The
    starting point is the grid's own scales, clipped into ``bounds``.
    """
    lo, hi = (float(b) for b in bounds)
    if lo <= 0 or hi < lo:
        raise ValueError("bounds must satisfy 0 < lo <= hi")
    rows, cols = grid.shape
    x = [float(grid.scales(i, j)[k]) for i in range(rows) for j in range(cols) for k in range(2)]
    x = [min(hi, max(lo, s)) for s in x]

    def to_scales(vec):
        it = iter(Fraction(s).limit_denominator(SCALE_DENOMINATOR) for s in vec)
        return [[(next(it), next(it)) for _ in range(cols)] for _ in range(rows)]

    evals = 0
    history: List[float] = []

    def f(vec) -> float:
        nonlocal evals
        if evals >= budget:
            raise _Budget
        evals += 1
        val = grid_objective(grid.with_scales(to_scales(vec)), resolution)
        history.append(val)
        return val

    best_x = list(x)
    try:
        best = f(x)
    except _Budget:
        return OptimizationResult(to_scales(x), math.nan, math.nan, 0, True)
    start = best

    def consider(vec, val):
        nonlocal best, best_x
        if val < best:
            best, best_x = val, list(vec)

    def golden(make_vec, a, b):
        c = b - GOLDEN * (b - a)
        d = a + GOLDEN * (b - a)
        vc, vd = make_vec(c), make_vec(d)
        fc, fd = f(vc), f(vd)
        consider(vc, fc)
        consider(vd, fd)
        for _ in range(line_steps):
            if fc < fd or (math.isinf(fc) and math.isinf(fd) and c > d):
                b, d, fd = d, c, fc
                c = b - GOLDEN * (b - a)
                vc = make_vec(c)
                fc = f(vc)
                consider(vc, fc)
            else:
                a, c, fc = c, d, fd
                d = a + GOLDEN * (b - a)
                vd = make_vec(d)
                fd = f(vd)
                consider(vd, fd)

    exhausted = False
    try:
        if hi > lo:
            base = list(best_x)
            t_lo, t_hi = lo / min(base), hi / max(base)
            if t_hi > t_lo:
                # the objective is far from unimodal in the common multiplier:
                # bracket with a log-spaced scan, then refine
                ts = [t_lo * (t_hi / t_lo) ** (k / (scan - 1)) for k in range(scan)]
                vals = []
                for t in ts:
                    vec = [s * t for s in base]
                    val = f(vec)
                    consider(vec, val)
                    vals.append(val)
                k = min(range(scan), key=lambda i: (vals[i], i))
                golden(lambda t: [s * t for s in base], ts[max(k - 1, 0)], ts[min(k + 1, scan - 1)])
            while True:
                before = best
                for k in range(len(best_x)):
                    def along(t, k=k, base=list(best_x)):
                        v = list(base)
                        v[k] = t
                        return v
                    golden(along, lo, hi)
                if not best < before:
                    break
    except _Budget:
        exhausted = True
    return OptimizationResult(to_scales(best_x), start, best, evals, exhausted, history)
