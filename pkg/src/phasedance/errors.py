"""Exception types shared across the package."""


class PhasedanceError(Exception):
    """Base class for errors raised by this package."""


class ShapeError(PhasedanceError, ValueError):
    """Operands or parameters do not conform in shape."""


class NonFiniteError(PhasedanceError, FloatingPointError):
    """A forward computation produced NaN or Inf."""


class DegenerateInputError(PhasedanceError, ValueError):
    """Input is numerically degenerate (zero/parallel vectors, empty data)."""


class ConfigError(PhasedanceError, ValueError):
    """Invalid or unknown configuration content."""


class CheckpointError(PhasedanceError, ValueError):
    """Checkpoint file is unreadable or inconsistent with the config."""


class TrainingDiverged(PhasedanceError, RuntimeError):
    """Training aborted on a non-finite loss.

    Carries the records up to (and including) the diagnostic record for
    the failing step, so callers can persist the last good state.
    """

    def __init__(self, message, records):
        super().__init__(message)
        self.records = records
