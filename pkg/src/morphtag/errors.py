"""Exception hierarchy shared by all morphtag modules."""


class MorphtagError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(MorphtagError):
    """Malformed input file (corpus, lexicon, rules, schema, spec)."""

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        prefix = ""
        if path is not None:
            prefix += str(path)
        if line is not None:
            prefix += f":{line}"
        if prefix:
            message = f"{prefix}: {message}"
        super().__init__(message)


class DataError(MorphtagError):
    """Well-formed input with inconsistent or unusable content."""


class ConfigError(MorphtagError):
    """Invalid configuration or option combination."""


class SchemaError(MorphtagError):
    """A tag schema lookup failed (unknown POS class, bad descriptor)."""
