"""Shared exception types, mapped to CLI exit codes by glsmooth.cli."""


class ConfigError(ValueError):
    """Invalid configuration value (bad slope, impossible schedule, ...)."""


class DataError(ValueError):
    """Malformed input data: lexicon/taxonomy files, report records, datasets."""


class NumericError(RuntimeError):
    """Numerical failure during training or evaluation (non-finite loss, ...)."""
