"""Error types shared across the package, mapped to CLI exit codes."""


class DirtyMacError(Exception):
    """Base class for package errors."""


class ConfigError(DirtyMacError):
    """Invalid configuration or validation failure (exit code 1)."""


class GeometryError(DirtyMacError):
    """Degenerate scenario geometry such as coincident nodes."""


class ConvergenceError(DirtyMacError):
    """A numerical procedure failed to reach its tolerance (exit code 3)."""
