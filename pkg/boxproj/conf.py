"""
Runtime settings for boxproj.

Settings come from ``BOXPROJ_*`` environment variables. Only knobs that
cannot change numeric results live here; anything that does (block size,
caps, tolerances) is a module constant.
"""

import logging
import os

from pydantic import BaseModel, Field, ValidationError, field_validator

from .exceptions import InvalidParameterError

ENV_PREFIX = 'BOXPROJ_'


def default_threads():
    """
    Number of workers used when BOXPROJ_THREADS is unset.

    Returns:
        int: CPU count, at least 1
    """
    return max(1, os.cpu_count() or 1)


class Settings(BaseModel):
    """
    Environment-driven configuration.

    Attributes:
        threads (int): Upper bound on worker processes (BOXPROJ_THREADS)
        log_level (str): Logging level name for the CLI (BOXPROJ_LOG_LEVEL)
        default_trials (int): Trials per estimate when --trials is omitted
    """

    threads: int = Field(default_factory=default_threads, ge=1)
    log_level: str = 'WARNING'
    default_trials: int = Field(100_000, ge=1)

    @field_validator('log_level')
    @classmethod
    def check_log_level(cls, value):
        name = value.upper()
        if not isinstance(logging.getLevelName(name), int):
            raise ValueError(f'unknown log level {value!r}')
        return name


def get_settings(environ=None):
    """
    Build Settings from the environment.

    Args:
        environ: Mapping to read from (default: os.environ)

    Returns:
        Settings instance

    Raises:
        InvalidParameterError: if a BOXPROJ_* variable does not validate
    """
    environ = os.environ if environ is None else environ
    values = {}
    for name in Settings.model_fields:
        key = ENV_PREFIX + name.upper()
        if environ.get(key, '') != '':
            values[name] = environ[key]
    try:
        return Settings(**values)
    except ValidationError as exc:
        raise InvalidParameterError(f'invalid environment settings: {exc}') from exc
