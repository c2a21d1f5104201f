class TrainerError(Exception):
    """Base class for all harness errors."""


class ConfigError(TrainerError):
    """Invalid experiment configuration or input shape."""


class IoError(TrainerError):
    """Missing or unreadable input artifacts."""
