"""Exception types shared across the package."""


class NumericalError(RuntimeError):
    """A numerical procedure failed to converge or produced invalid values."""


class DefectiveMatrixError(NumericalError):
    """Eigendecomposition is too ill-conditioned to trust.

    Raised when the eigenvector matrix has condition number above the guard
    threshold; callers should switch to the truncated-sum backend, which does
    not require diagonalizability.
    """


class DivergenceError(NumericalError):
    """A generated trajectory left its admissible range."""


class ConfigError(ValueError):
    """An experiment configuration is malformed or inconsistent."""
