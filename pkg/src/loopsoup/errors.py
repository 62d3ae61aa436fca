"""Exception types shared across the package."""


class LoopSoupError(Exception):
    """Base class for package errors."""


class DivergentQuery(LoopSoupError):
    """Raised when a requested quantity is infinite.

    The total mass of loops covering a point with no lower diameter
    cutoff diverges logarithmically, so queries equivalent to
    ``alpha_{0,D}(z)`` must fail loudly instead of returning a number.
    """


class InvalidQuery(LoopSoupError):
    """Raised for queries whose parameters are malformed or unsupported."""


class BudgetError(LoopSoupError):
    """Raised when a Monte Carlo budget is non-positive or nonsensical."""


class NotPositiveSemidefinite(LoopSoupError):
    """Raised when a covariance matrix cannot be repaired within the
    jitter policy's tolerance."""


class ParameterOutOfRange(LoopSoupError):
    """Raised when parameters violate a stated hypothesis window
    (e.g. a conformal dimension >= 1/2)."""


class NumericalFailure(LoopSoupError):
    """Raised when an iterative numerical routine fails its residual
    tolerance (e.g. a Bessel zero that does not converge)."""


class GridMismatch(LoopSoupError):
    """Raised when a field sample and a basis/kernel were built on
    incompatible quadrature grids."""


class TruncationWarning(UserWarning):
    """Emitted when an extrapolated tail exceeds 10% of a truncated
    series value, signalling that more modes are needed."""
