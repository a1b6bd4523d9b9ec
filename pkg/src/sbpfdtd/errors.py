"""Exception types shared across the solver."""


class SbpFdtdError(Exception):
    """Base class for all solver errors."""


class InvalidArgument(SbpFdtdError, ValueError):
    """An argument violates a documented precondition."""


class LayoutMismatch(InvalidArgument):
    """A field array does not match the staggered layout it claims."""


class UnsupportedPairing(InvalidArgument):
    """A boundary trace was requested for a field/edge pair that has none."""


class OperatorUnderdetermined(InvalidArgument):
    """Too few cells: the one-sided closure rows would overlap."""


class TooLargeForDense(SbpFdtdError):
    """State dimension exceeds the dense-assembly cap."""


class EstimationFailed(SbpFdtdError):
    """The spectral time-step estimate did not converge."""


class NumericalBlowup(SbpFdtdError):
    """Non-finite field values appeared during time marching."""

    def __init__(self, step_index: int, detail: str = ""):
        self.step_index = step_index
        msg = f"non-finite field values at step {step_index}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ConfigError(SbpFdtdError):
    """One or more scenario-config violations; carries the full list."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__(
            "invalid scenario config:\n"
            + "\n".join(f"  {v}" for v in self.violations)
        )
