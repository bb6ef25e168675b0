"""Hermite interpolation of points with normals by piecewise rational
surfaces with Pythagorean normals, with exact verification."""

__version__ = "0.1.0"

from .dualspace import RationalPNPatch, iota, iota_inv, xi_patch  # noqa: E402
from .errors import DegeneracyError, InputError, PNError  # noqa: E402
from .patchwork import HermiteGrid, assemble_network, interpolate  # noqa: E402

__all__ = [
    "__version__",
    "DegeneracyError",
    "HermiteGrid",
    "InputError",
    "PNError",
    "RationalPNPatch",
    "assemble_network",
    "interpolate",
    "iota",
    "iota_inv",
    "xi_patch",
]
