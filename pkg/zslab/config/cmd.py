# coding: utf-8

import logging
from typing import Tuple, Dict, Any

from .base import BaseConfig
from ..constants import DEFAULT_LOG_LEVEL, DEFAULT_LOG_LAYOUT
from ..errors import ConfigError
from ..util import parse_size


class CommandArgsConfig(BaseConfig):
    """
    Settings given on the command line; anything left unset falls back to ``fallback``,
    typically the YAML config named by ``--config``.
    """

    def __init__(self,
                 log_level: str = None,
                 log_layout: str = None,
                 threads: int = None,
                 mem_cap: str | int = None,
                 exact_counting: bool = None,
                 fallback: BaseConfig = None,
                 ):
        self.log_level = log_level
        self.log_layout = log_layout
        self.threads = threads
        try:
            self.mem_cap = None if mem_cap is None else parse_size(mem_cap)
        except ValueError as err:
            raise ConfigError(f"--mem-cap: {err}") from err
        self.exact_counting = exact_counting
        self.fallback = fallback

    def get_log_level_and_layout(self) -> Tuple[str, str]:
        level, layout = self.fallback.get_log_level_and_layout() if self.fallback else (None, None)
        level = self.log_level or level or logging.getLevelName(DEFAULT_LOG_LEVEL)
        layout = self.log_layout or layout or DEFAULT_LOG_LAYOUT
        return level.upper(), layout

    def get_settings(self) -> Dict[str, Any]:
        settings = self.fallback.get_settings() if self.fallback else {}
        own = {"threads": self.threads, "mem_cap": self.mem_cap, "exact_counting": self.exact_counting}
        settings.update({key: value for key, value in own.items() if value is not None})
        return settings
