"""Exception hierarchy shared by every module of the package."""


class TenfoldError(Exception):
    """Base class for all errors raised by tenfold."""


class ModelValidationError(TenfoldError):
    """A Bloch model failed load-time validation (shape, Hermitian closure)."""

    def __init__(self, message, R=None):
        super().__init__(message)
        self.R = R


class GapClosed(TenfoldError):
    """The spectrum touches the Fermi level (energy 0) at some momentum."""

    def __init__(self, k, gap):
        self.k = tuple(float(x) for x in k)
        self.gap = float(gap)
        super().__init__(f"gap closed at k={self.k} (min |E| = {self.gap:.3g})")


class InconsistentFilling(TenfoldError):
    """The number of negative-energy bands varies over the grid."""


class NonUnitary(TenfoldError):
    """A symmetry representation matrix is not unitary."""


class InvalidRepresentation(TenfoldError):
    """U conj(U) is neither +I nor -I."""


class ClassificationConflict(TenfoldError):
    """Supplied symmetries are mutually inconsistent."""


class SymmetryViolation(TenfoldError):
    """A symmetry required by an invariant is not satisfied by the model."""


class ChiralViolation(SymmetryViolation):
    """The supplied chiral operator does not anticommute with H(k)."""


class GridTooCoarse(TenfoldError):
    """A discretised invariant cannot be evaluated unambiguously on this grid."""


class SingularLink(GridTooCoarse):
    """A link overlap between neighbouring filled frames is (nearly) singular."""


class Obstruction(TenfoldError):
    """A linear interpolation path closes the gap and cannot be flattened."""

    def __init__(self, k, theta, gap):
        self.k = tuple(float(x) for x in k)
        self.theta = float(theta)
        self.gap = float(gap)
        super().__init__(
            f"interpolation obstructed at k={self.k}, theta={self.theta:.6g} "
            f"(gap {self.gap:.3g})")


class EndpointAsymmetry(TenfoldError):
    """An interpolation endpoint breaks the symmetry used for extension."""

    def __init__(self, endpoint, residual):
        self.endpoint = endpoint
        self.residual = float(residual)
        super().__init__(
            f"endpoint theta={endpoint} violates the symmetry "
            f"(residual {self.residual:.3g})")
