"""Exception types shared across the package."""


class BeliefError(Exception):
    """Base class for all domain errors raised by this package."""


class BadSubsetError(BeliefError):
    """A subset reference does not belong to the frame of discernment."""


class NegativeMassError(BeliefError):
    """A mass assignment contains a negative value."""


class NotNormalizedError(BeliefError):
    """Masses do not sum to 1 within the construction tolerance."""


class FrameMismatchError(BeliefError):
    """Two distributions refer to different frames of discernment."""


class AlphaOutOfRangeError(BeliefError):
    """A reliability coefficient lies outside [0, 1]."""


class TotalConflictError(BeliefError):
    """Essentially all mass sits on the empty set; the operation is undefined."""


class NonFiniteInputError(BeliefError):
    """A numeric input is NaN or infinite."""


class PartitionOverlapError(BeliefError):
    """True/false membership functions overlap beyond a total of 1."""


class MissingParameterError(BeliefError):
    """A rule references a parameter absent from the evidence."""


class InconsistentPriorError(BeliefError):
    """The prior distribution puts mass outside the model's focal sets."""


class NonNormalizedMeasurementError(BeliefError):
    """A measurement fed to the filter carries mass on the empty set."""


class EmptyInputError(BeliefError):
    """An operation requiring data received an empty sequence."""


class TraceParseError(BeliefError):
    """A trace file could not be parsed; the message names row and column."""


class RaggedRowsError(BeliefError):
    """A trace file row has a different number of cells than the header."""


class ConfigError(BeliefError):
    """A pipeline configuration is invalid or incomplete."""
