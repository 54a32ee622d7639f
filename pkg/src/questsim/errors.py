"""Exception types shared across the simulator."""


class QuestSimError(Exception):
    """Base class for all simulator errors."""


class InvalidArgumentError(QuestSimError, ValueError):
    """An argument violates a documented precondition."""


class SingularParameterError(QuestSimError, ValueError):
    """A parameter combination makes a formula singular (e.g. 0/0)."""


class TruncationRiskError(QuestSimError, ValueError):
    """An operation would leak significant amplitude past the photon cutoff."""


class NumericError(QuestSimError, RuntimeError):
    """A numerical routine failed to converge; carries diagnostics."""


class CalibrationError(QuestSimError, ValueError):
    """Calibration input data is unusable (too few rows, non-monotone, ...)."""


class UnreachableRateError(QuestSimError, ValueError):
    """A requested dark-count target cannot be reached by cooling."""


class UndefinedEstimateError(QuestSimError, ZeroDivisionError):
    """An estimator is undefined for the given counts (e.g. zero singles)."""


class ConfigValidationError(QuestSimError, ValueError):
    """One or more scenario-config guards are violated.

    Collects every violation so a bad config is reported in a single pass.
    """

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid configuration:\n" + "\n".join(f"  - {p}" for p in self.problems))


class NonUnimodalObjectiveError(QuestSimError, RuntimeError):
    """A 1-D minimisation found multiple local minima; carries the full scan."""

    def __init__(self, message, scan):
        self.scan = scan
        super().__init__(message)
