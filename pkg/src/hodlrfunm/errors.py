"""Exception types shared across the package.

Input-validation problems derive from ValueError; numerical failures
(singularities, rank blow-ups, stalled iterations) derive from
ArithmeticError so callers can distinguish "fix the call" from
"the computation broke".
"""


class InvalidInputError(ValueError):
    """Malformed numeric input: wrong shape, empty, or non-finite entries."""


class InvalidGeometryError(ValueError):
    """Enclosure or radius parameters outside their admissible ranges."""


class DegenerateContourError(ValueError):
    """A pole sits on (or within tolerance of) the integration contour."""


class NearDefectiveError(ArithmeticError):
    """Eigenvector matrix too ill-conditioned for a diagonalization-based path."""


class RankOverflowError(ArithmeticError):
    """An off-diagonal block exceeded the configured rank cap after truncation."""

    def __init__(self, message, path=""):
        super().__init__(message)
        self.path = path


class SingularPivotError(ArithmeticError):
    """A dense leaf factorization met a pivot below the singularity floor."""

    def __init__(self, message, path=""):
        super().__init__(message)
        self.path = path


class NodeSingularityError(ArithmeticError):
    """A quadrature node z made zI - A singular."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class ConvergenceError(ArithmeticError):
    """Adaptive refinement hit its node budget before meeting tolerance."""

    def __init__(self, message, diffs=()):
        super().__init__(message)
        self.diffs = list(diffs)


class ExperimentIntegrityError(RuntimeError):
    """Cross-check between two independent computations of the same quantity failed."""
