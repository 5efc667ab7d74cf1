"""Exception types shared across the package."""


class CutoffTooSmallError(ValueError):
    """A Fock cutoff cannot represent a coherent amplitude to tolerance.

    Carries the offending amplitude, the cutoff and the computed Poisson
    tail so callers can report or enlarge the basis.
    """

    def __init__(self, amplitude, cutoff, tail, tol):
        self.amplitude = amplitude
        self.cutoff = cutoff
        self.tail = tail
        self.tol = tol
        super().__init__(
            f"cutoff d={cutoff} too small for |alpha|={abs(amplitude):.4g}: "
            f"Poisson tail {tail:.3e} >= tolerance {tol:.1e}"
        )


class DegenerateStateError(ValueError):
    """Superposition parameters give a (numerically) vanishing norm."""


class DimensionMismatchError(ValueError):
    """Operands live on different truncated spaces."""


class StepSizeError(ValueError):
    """Finite-difference step too small for double precision."""


class ConfigError(ValueError):
    """Scenario file failed to parse or validate."""


class IntegrationFailureError(RuntimeError):
    """Trajectory violated trace or positivity tolerances.

    `diagnostics` holds the per-grid-point records collected up to the
    failure.
    """

    def __init__(self, message, diagnostics=None):
        self.diagnostics = diagnostics or []
        super().__init__(message)


class StabilityWarning(UserWarning):
    """Step size close to or beyond the RK4 stability bound."""
