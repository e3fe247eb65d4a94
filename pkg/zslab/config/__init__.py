# coding: utf-8

from .base import BaseConfig
from .cmd import CommandArgsConfig
from .yml import new_yml_config, YamlConfig, YamlLoader
