"""Exception taxonomy shared by all picklab modules."""


class PicklabError(Exception):
    """Base class for all picklab errors."""


class DimensionError(PicklabError, ValueError):
    """Matrix dimensions do not conform."""


class ShapeError(PicklabError, ValueError):
    """Structured data (graded blocks, tuples) has incompatible shapes."""


class DomainError(PicklabError, ValueError):
    """A point lies outside the admissible domain (disk, ball, generalized disk)."""


class ArgumentError(PicklabError, ValueError):
    """Invalid scalar argument (negative tolerance, zero basis dimension, ...)."""


class DivergenceError(PicklabError, ArithmeticError):
    """A geometric operator series does not converge (spectral radius too large)."""


class RegularityError(PicklabError, ArithmeticError):
    """Lyapunov/Sylvester regularity fails; carries the offending eigenvalue pair."""

    def __init__(self, message, eigenvalue_pair=None):
        super().__init__(message)
        self.eigenvalue_pair = eigenvalue_pair


class NumericError(PicklabError, ArithmeticError):
    """A numerical routine failed to converge or hit working precision limits."""


class BudgetError(PicklabError, RuntimeError):
    """The configured work budget would be exceeded; carries the achieved bound."""

    def __init__(self, message, achieved_bound=None):
        super().__init__(message)
        self.achieved_bound = achieved_bound


class PathError(PicklabError, ValueError):
    """A quiver path is not composable."""


class MapError(PicklabError, ValueError):
    """A linear map on matrices violates a structural requirement."""
