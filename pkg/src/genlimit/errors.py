"""Exception types shared across the package."""


class GenlimitError(Exception):
    """Base class for all package errors."""


class SchemaError(GenlimitError):
    """A collection, groups, script or table document does not match its schema."""


class FiniteLanguageError(SchemaError):
    """A declared language is finite; every language must be infinite."""


class RegistryMismatchError(GenlimitError):
    """Two set expressions (or an expression and a token) disagree on the atom registry."""


class CapacityError(GenlimitError):
    """An exhaustive search was requested beyond its configured size bound."""


class ParameterError(GenlimitError):
    """A numeric parameter is outside its admissible range."""


class NoAttackError(GenlimitError):
    """No adversarial script exists for the requested target (its witness is empty)."""


class AdmissibilityError(GenlimitError):
    """A declared per-language time sequence is not admissible."""


class UnboundedScheduleError(GenlimitError):
    """An explicit schedule table was exhausted before reaching the requested prefix size."""


class PartitionError(GenlimitError):
    """The declared group family is not a partition of the universe."""
