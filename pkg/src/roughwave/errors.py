"""Exception hierarchy shared by every module."""


class RoughWaveError(Exception):
    """Base class for all package errors."""


class ParameterDomainError(RoughWaveError, ValueError):
    """A parameter lies outside its admissible range."""

    def __init__(self, field: str, value, reason: str = ""):
        self.field = field
        self.value = value
        msg = f"{field}={value!r} is out of range"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


class RegimeError(RoughWaveError):
    """The requested quantity does not exist in the classified regime."""


class UnsupportedError(RoughWaveError):
    """The operation is deliberately not implemented for this input."""


class SingularityError(RoughWaveError, ValueError):
    """Evaluation at a point where the function is singular."""


class PreconditionError(RoughWaveError, ValueError):
    """Caller violated an ordering or shape precondition."""


class InputError(RoughWaveError, ValueError):
    """Insufficient or malformed input data."""


class CapacityError(RoughWaveError):
    """The request would exceed a hard size limit."""


class DivergenceError(RoughWaveError):
    """An integral that is required to converge does not."""


class AccuracyError(RoughWaveError):
    """A numerical method did not reach the requested tolerance."""

    def __init__(self, message: str, estimate: float = float("nan")):
        self.estimate = estimate
        super().__init__(f"{message} (achieved error estimate {estimate:.3g})")


class TruncationError(RoughWaveError):
    """A series tail could not be controlled at the requested order."""

    def __init__(self, message: str, last_ratio: float):
        self.last_ratio = last_ratio
        super().__init__(f"{message} (last term ratio {last_ratio:.6g})")
