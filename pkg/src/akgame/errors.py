"""Exception types shared across the engine."""


class ValidationError(ValueError):
    """Inputs violate a documented precondition or invariant."""


class SizeLimitError(ValidationError):
    """An enumeration-based routine was asked to exceed its hard cap."""


class SchemaError(ValueError):
    """A JSON document cannot be parsed into an engine entity."""


class SchemaVersionError(SchemaError):
    """A document declares a schema_version this build does not read."""
