"""Exception types shared across the package."""


class TrunkloadError(Exception):
    """Base class for all trunkload errors."""


class ParseError(TrunkloadError):
    """A document is syntactically malformed or violates the schema."""


class ValidationError(TrunkloadError):
    """A structurally parseable model violates a domain invariant."""


class ConfigError(TrunkloadError):
    """A configuration value is out of range or inconsistent."""


class DimensionError(TrunkloadError):
    """An array argument does not match the model's coordinate count."""


class UnknownSegmentError(TrunkloadError):
    pass


class UnknownMuscleError(TrunkloadError):
    pass


class UnknownCoordinateError(TrunkloadError):
    pass


class UnknownPhaseError(TrunkloadError):
    pass


class ModelMismatchError(TrunkloadError):
    """The model lacks a segment or attachment the scenario requires."""


class EmptyGroupError(TrunkloadError):
    pass


class EmptyInputError(TrunkloadError):
    pass


class InfeasibleError(TrunkloadError):
    """No activation vector satisfies the moment balance within bounds."""


class OracleTooLargeError(TrunkloadError):
    """Grid enumeration would exceed the exhaustive-search guard."""
