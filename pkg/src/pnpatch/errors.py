"""Exception hierarchy.

Every error raised by the library derives from :class:`PNError`. The CLI maps
the three broad families onto its exit codes (input errors -> 2, degeneracy
errors -> 3).
"""


class PNError(Exception):
    """Base class for all library errors."""


class InputError(PNError):
    """Malformed or inadmissible input data."""


class DegeneracyError(PNError):
    """A geometric construction hit a degenerate configuration."""


# algebra
class PoleError(DegeneracyError, ZeroDivisionError):
    pass


class SingularError(DegeneracyError, ZeroDivisionError):
    pass


# dual space
class ZeroNormalError(InputError):
    pass


class NorthPoleError(DegeneracyError):
    def __init__(self, msg="normal (0,0,1) has no image in the isotropic model", index=None):
        if index is not None:
            msg = f"{msg} (grid index {index})"
        super().__init__(msg)
        self.index = index


class DegeneratePlaneError(DegeneracyError):
    pass


class GaussDegenerateError(DegeneracyError):
    pass


class GloballyDegenerateError(DegeneracyError):
    pass


# patchwork
class DegenerateTangentError(DegeneracyError):
    pass


class CornerMismatchError(DegeneracyError):
    pass


# analysis
class NonAdjacentError(InputError):
    pass


class BudgetExhausted(PNError):
    """Raised only when a caller asks for strict budget handling."""


# polypn
class NotPythagoreanError(InputError):
    def __init__(self, msg, residual=None):
        super().__init__(msg)
        self.residual = residual


class EmptySolutionError(DegeneracyError):
    pass


# io
class ParseError(InputError):
    pass


class PoleProximityError(InputError):
    def __init__(self, indices, eps):
        self.indices = list(indices)
        super().__init__(
            f"normals within {eps:g} rad of (0,0,1) at {self.indices}; "
            "rotate the data first (try --auto-rotate)"
        )


class StillNearPoleError(InputError):
    pass
