"""Exception hierarchy shared across the simulator.

Every error raised on purpose derives from :class:`CimcolError`, split into
two broad families so the command line tool can map them onto exit codes:
validation problems (bad arguments, malformed configs) and constraint
violations detected while the model is otherwise well formed.
"""


class CimcolError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(CimcolError):
    """Malformed or out-of-range user input."""


class ConstraintError(CimcolError):
    """A modeling constraint does not hold for otherwise valid input."""


class ConfigError(ValidationError):
    """A run configuration is missing keys, has bad types, or bad values."""


class InvalidDrive(ValidationError):
    """A pulse-width vector violates the drive window contract."""


class InvalidCodec(ValidationError):
    """Codec parameters are inconsistent with the device resistance window."""


class WeightOutOfRange(ValidationError):
    """A weight falls outside the representable range of the codec."""


class InputOutOfRange(ValidationError):
    """An input value falls outside the codec's signed or time window."""


class EmptyColumn(ValidationError):
    """A column was built with zero rows."""


class LengthMismatch(ValidationError):
    """Two per-row sequences that must agree in length do not."""


class TimeOutOfRange(ValidationError):
    """A readout time falls outside the simulated window."""


class DegenerateInput(ValidationError):
    """Not enough information to perform a fit or statistic."""


class MatchingViolated(ConstraintError):
    """Row conductance sums deviate beyond tolerance from their mean."""


class NumericError(CimcolError):
    """A computation produced non-finite results."""
