"""Exception hierarchy shared by all semkit modules."""


class SemkitError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(SemkitError):
    """Missing input file or malformed configuration."""


class IntegrityError(SemkitError):
    """Dangling object id or violated store invariant."""


class FormatError(SemkitError):
    """Malformed row, token, or meaning string."""


class DuplicateError(SemkitError):
    """Insertion would violate a uniqueness constraint."""


class ValidationError(SemkitError):
    """Payload rejected by a store's validation rules."""


class StorageError(SemkitError):
    """I/O failure while persisting a store."""


class ResourceLimitError(SemkitError):
    """A configured search or size limit was exceeded."""
