"""Verification and analysis of PN patches."""

from .continuity import ContinuityReport, g1_check, network_edges, offset
from .curvature import (
    CurvatureGrid,
    ObjectiveValue,
    RidgeReport,
    curvature_analysis,
    objective,
    ridge_detect,
)
from .mesh import TriangleMesh, tessellate
from .optimize import OptimizationResult, grid_objective, optimize_scales
from .pn import PNCertificate, envelope_checks, normal_parallel_check, pn_verify

__all__ = [
    "ContinuityReport",
    "CurvatureGrid",
    "ObjectiveValue",
    "OptimizationResult",
    "PNCertificate",
    "RidgeReport",
    "TriangleMesh",
    "curvature_analysis",
    "envelope_checks",
    "g1_check",
    "grid_objective",
    "network_edges",
    "normal_parallel_check",
    "objective",
    "offset",
    "optimize_scales",
    "pn_verify",
    "ridge_detect",
    "tessellate",
]
