"""Exception types shared across the package."""


class AmckitError(Exception):
    """Base class for all errors raised by amckit."""


class ConfigError(AmckitError):
    """Bad configuration value, e.g. an unknown semiring or variant name."""


class ParseError(AmckitError):
    """Malformed input file. Carries the path and 1-based line number."""

    def __init__(self, path, line, message):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


class ScaleError(AmckitError):
    """Brute-force oracle invoked beyond its variable budget."""


class StructureError(AmckitError):
    """Circuit failed a structural precondition; carries the report."""

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class UnsupportedOperationError(AmckitError):
    """Operation not available for the chosen semiring."""
