"""Exception types shared across the package.

The CLI maps each class to a distinct exit code, so errors raised deep in
the numerics surface as meaningful process results.
"""


class SimulmeasError(Exception):
    """Base class for all package-specific errors."""


class UsageError(SimulmeasError, ValueError):
    """Invalid argument: out-of-range parameter, dimension mismatch, bad distribution."""


class RescalingSingularError(SimulmeasError):
    """Outcome rescaling is singular: the probe overlap is 0 or 1.

    At overlap 0 the object-side observable carries no signal after rescaling
    by 1/overlap; at overlap 1 the probe carries no information at all.
    """


class DegenerateBasisError(SimulmeasError):
    """No informative probe measurement basis exists (conditional probe states coincide)."""


class EmptyEnsembleError(SimulmeasError):
    """Post-selection removed every event (zero transmission on both polarizer axes)."""


class CalibrationInfeasibleError(SimulmeasError):
    """No rotation angle satisfies the optimal-product condition for this plate stack.

    Carries the scanned residual curve for diagnostics: ``alpha_grid`` and
    ``residuals`` are equal-length lists of floats.
    """

    def __init__(self, message, alpha_grid=None, residuals=None):
        super().__init__(message)
        self.alpha_grid = list(alpha_grid) if alpha_grid is not None else []
        self.residuals = list(residuals) if residuals is not None else []
