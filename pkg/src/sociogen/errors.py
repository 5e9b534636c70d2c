"""Exception types shared across the package."""


class SociogenError(Exception):
    """Base class for all errors raised deliberately by this package."""


class ParseError(SociogenError):
    """An input file could not be parsed.

    Carries enough context (path, line number) to point the user at the
    offending line.
    """

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix = f"{path}:" if line is None else f"{path}:{line}:"
        super().__init__(f"{prefix} {message}" if prefix else message)


class ConfigError(SociogenError):
    """A configuration value is missing, malformed, or out of range."""


class GraphError(SociogenError):
    """A graph is structurally unusable for the requested operation."""
