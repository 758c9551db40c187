"""Structured error types shared across the toolkit."""


class DobsimError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class ConfigError(DobsimError):
    """Bad or unknown configuration key / unreadable config file."""

    exit_code = 2


class InputValidationError(DobsimError):
    """Non-finite or out-of-contract input to a numerical operation."""

    exit_code = 3


class InfeasibleThrustError(DobsimError):
    """Requested control input demands a negative squared rotor speed."""

    exit_code = 3

    def __init__(self, rotor: int, value: float):
        self.rotor = rotor
        self.value = value
        super().__init__(
            f"rotor {rotor} requires omega^2 = {value:.6g} < 0; input not realizable"
        )


class IntegrationBlowupError(DobsimError):
    """Integrator produced a non-finite state."""

    exit_code = 4

    def __init__(self, step: int | None = None):
        self.step = step
        where = f" at step {step}" if step is not None else ""
        super().__init__(f"integration produced a non-finite state{where}")


class DegenerateDenominatorError(DobsimError):
    """Virtual-reference denominator too close to zero."""

    exit_code = 3


class InvalidCutoffError(DobsimError):
    """Low-pass cutoff at or above the Nyquist rate."""

    exit_code = 3


class EstimatorFaultError(DobsimError):
    """Disturbance estimator received or produced a non-finite signal."""

    exit_code = 4


class DimensionMismatchError(DobsimError):
    """State-space blocks with inconsistent dimensions."""

    exit_code = 3

    def __init__(self, block: str, detail: str):
        self.block = block
        super().__init__(f"block '{block}': {detail}")


class NumericalFailureError(DobsimError):
    """Iterative numerical routine failed to converge."""

    exit_code = 4


class SynthesisFailureError(DobsimError):
    """Learning-filter search did not reach its target peak gain."""

    exit_code = 5

    def __init__(self, best_gamma: float):
        self.best_gamma = best_gamma
        super().__init__(
            f"filter search stopped with peak gain {best_gamma:.6g} >= 1"
        )


class TrainingFailureError(DobsimError):
    """Model training produced a non-finite loss."""

    exit_code = 5


class InstabilityError(DobsimError):
    """Closed-loop simulation diverged."""

    exit_code = 4

    def __init__(self, step: int):
        self.step = step
        super().__init__(f"closed-loop simulation diverged at step {step}")


class IOFailureError(DobsimError):
    """File read/write failure, annotated with the path."""

    exit_code = 6
