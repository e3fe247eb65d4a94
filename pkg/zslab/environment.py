# coding: utf-8

import os
import threading
from typing import Optional

import psutil

from .constants import (
    MEM_CAP_ENV, DEFAULT_MEM_CAP, DEFAULT_THRESHOLD_CAP, DEFAULT_RANDOM_ATTEMPTS
)
from .errors import ConfigError
from .serialization import BaseModel, Field
from .util import parse_size

import logging
logger = logging.getLogger(__name__)


class Settings(BaseModel):
    mem_cap: int = DEFAULT_MEM_CAP
    exact_counting: bool = False
    threads: int = Field(1, ge=1)
    threshold_cap: int = DEFAULT_THRESHOLD_CAP
    search_time_budget: Optional[float] = None
    random_attempts: int = DEFAULT_RANDOM_ATTEMPTS


class Environment:
    """
    Process-wide holder of the active :class:`Settings`.

    The memory cap can be overridden by the ``ZSLAB_MEM_CAP`` environment
    variable (bytes, optional K/M/G suffix).
    """

    _inst = None
    _lock = threading.Lock()

    settings: Settings

    @classmethod
    def instance(cls, *args, **kwargs):
        if cls._inst is None:
            with cls._lock:
                if cls._inst is None:
                    cls._inst = cls(*args, **kwargs)
        return cls._inst

    def __init__(self, settings: Settings = None):
        self.settings = settings or Settings()
        env_cap = os.environ.get(MEM_CAP_ENV)
        if env_cap:
            try:
                self.settings.mem_cap = parse_size(env_cap)
            except ValueError as err:
                raise ConfigError(f"{MEM_CAP_ENV}: {err}") from err
            logger.debug("memory cap from %s: %d bytes", MEM_CAP_ENV, self.settings.mem_cap)
        self._check_mem_cap()

    def _check_mem_cap(self):
        available = psutil.virtual_memory().available
        if self.settings.mem_cap > available:
            logger.warning("memory cap %d exceeds available memory %d", self.settings.mem_cap, available)

    def update(self, **overrides):
        """
        Apply non-None overrides, e.g. the values parsed from a config file.
        """
        for key, value in overrides.items():
            if value is None:
                continue
            if key not in Settings.model_fields:
                raise ConfigError(f"unknown setting: {key}")
            setattr(self.settings, key, value)
        self._check_mem_cap()
        return self.settings

    @property
    def mem_cap(self) -> int:
        return self.settings.mem_cap

    @property
    def exact_counting(self) -> bool:
        return self.settings.exact_counting

    @property
    def threads(self) -> int:
        return self.settings.threads
