"""Exception types shared across the library."""


class ConfigurationError(ValueError):
    """A configuration is structurally invalid or inadequate for the task
    (camera coverage, grid resolution, pixel parity, ...)."""


class NumericalError(RuntimeError):
    """A numerical routine failed to meet its accuracy contract; the
    message carries the diagnostic."""


class FitError(ValueError):
    """A calibration fit is degenerate or violates its invariants."""
