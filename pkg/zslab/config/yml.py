# coding: utf-8

import os
import json
import logging
from pathlib import Path
from typing import Optional, Tuple, Dict, Any

import yaml
import jmespath
import pydantic

from ..constants import FilePathType, DEFAULT_LOG_LEVEL, DEFAULT_LOG_LAYOUT
from ..errors import ConfigError
from ..util import parse_size

from .base import BaseConfig


class YamlConfig(pydantic.BaseModel, BaseConfig, extra='forbid', populate_by_name=True):
    log_level: str = pydantic.Field(logging.getLevelName(DEFAULT_LOG_LEVEL), alias="log-level")
    log_layout: str = pydantic.Field(DEFAULT_LOG_LAYOUT, alias="log-layout")
    mem_cap: Optional[int | str] = pydantic.Field(None, alias="mem-cap")
    threads: Optional[int] = pydantic.Field(None, ge=1)
    exact_counting: Optional[bool] = pydantic.Field(None, alias="exact-counting")
    threshold_cap: Optional[int] = pydantic.Field(None, ge=2, alias="threshold-cap")
    search_time_budget: Optional[float] = pydantic.Field(None, gt=0, alias="search-time-budget")
    random_attempts: Optional[int] = pydantic.Field(None, ge=1, alias="random-attempts")

    config_yml: str

    def get_log_level_and_layout(self) -> Tuple[str, str]:
        return self.log_level.upper(), self.log_layout

    def get_settings(self) -> Dict[str, Any]:
        settings = self.model_dump(exclude={"log_level", "log_layout", "config_yml"}, exclude_none=True)
        if "mem_cap" in settings:
            try:
                settings["mem_cap"] = parse_size(settings["mem_cap"])
            except ValueError as err:
                raise ConfigError(f"{self.config_yml}: mem-cap: {err}") from err
        return settings


class YamlLoader(yaml.SafeLoader):
    def ref(self, node):
        """
        ``!ref {filename: other.yml, jmespath: a.b}`` pulls a value out of another YAML or JSON file.
        """
        kv = {}
        for key_node, val_node in node.value:
            kv[key_node.value] = val_node.value

        filename = Path(kv["filename"])
        if not filename.is_absolute() and self.name and os.path.exists(self.name):
            filename = Path(self.name).parent.joinpath(filename)

        match filename.suffix:
            case ".yml" | ".yaml":
                with filename.open("r", encoding="utf-8") as f:
                    data = yaml.load(f, Loader=YamlLoader)
            case ".json":
                with filename.open("r", encoding="utf-8") as f:
                    data = json.load(f)
            case _:
                raise ConfigError(f"DONT support file suffix: {filename}")

        return jmespath.search(kv["jmespath"], data)


YamlLoader.add_constructor("!ref", YamlLoader.ref)


def new_yml_config(filename: FilePathType) -> YamlConfig:
    root, ext = os.path.splitext(filename)
    ext = ext.lower()
    if ext not in (".yml", ".yaml"):
        raise ConfigError(f"Unsupported config file extension '{ext}'.")

    try:
        with open(filename, 'r', encoding='utf-8') as f:
            data = yaml.load(f, Loader=YamlLoader) or {}
    except (OSError, yaml.YAMLError) as err:
        raise ConfigError(f"can't load {filename}: {err}") from err

    try:
        return YamlConfig(config_yml=str(filename), **data)
    except pydantic.ValidationError as err:
        raise ConfigError(f"invalid config {filename}: {err}") from err
