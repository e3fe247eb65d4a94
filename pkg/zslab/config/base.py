# coding: utf-8

from typing import Tuple, Dict, Any
from abc import ABCMeta, abstractmethod


class BaseConfig(metaclass=ABCMeta):
    @abstractmethod
    def get_log_level_and_layout(self) -> Tuple[str, str]:
        pass

    @abstractmethod
    def get_settings(self) -> Dict[str, Any]:
        """
        Overrides for :class:`zslab.environment.Settings`; None values are left alone.
        """
        pass
