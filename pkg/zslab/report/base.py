# coding: utf-8

import enum
from pathlib import Path
from typing import ClassVar, List, Tuple, Any
from abc import ABCMeta, abstractmethod

import jinja2

from ..serialization import json_dumps

import logging
logger = logging.getLogger(__name__)


CURRENT_DIR = Path(__file__).parent
TEMPLATE_DIR = CURRENT_DIR.joinpath("templates")


def format_value(value: Any) -> str:
    """
    Stable text form of a report value: booleans lower-case, floats with 12 significant digits.
    """
    match value:
        case None:
            return "-"
        case bool():
            return "true" if value else "false"
        case enum.Enum():
            return str(value.value)
        case float():
            return f"{value:.12g}"
        case tuple() if all(isinstance(v, int) for v in value):
            return "(" + ",".join(map(str, value)) + ")"
        case list() | tuple():
            return ", ".join(format_value(v) for v in value) or "-"
        case dict():
            return ", ".join(f"{k}={format_value(v)}" for k, v in value.items()) or "-"
        case _:
            return str(value)


class BaseReport(metaclass=ABCMeta):
    STYLE: ClassVar

    def __init__(self, title: str, fields: List[Tuple[str, Any]] = None):
        self.title = title
        self.fields = fields or []

    @abstractmethod
    def render(self) -> str:
        pass

    def dump(self, filename: Path) -> Path:
        filename = Path(filename)
        logger.info("write %s report: %s", self.STYLE, filename)
        filename.write_text(self.render(), encoding="utf-8")
        return filename


class TextReport(BaseReport):
    """
    ``key: value`` lines in the given field order.
    """
    STYLE: ClassVar = "text"
    TEMPLATE: ClassVar = TEMPLATE_DIR.joinpath("report.j2")

    def __init__(self, title: str, fields: List[Tuple[str, Any]] = None, template: Path = None):
        super().__init__(title, fields)
        self.template = template

    def render(self) -> str:
        template = Path(self.template or self.TEMPLATE)
        template_dirs = [str(TEMPLATE_DIR)]
        if str(template.parent) not in template_dirs:
            template_dirs.append(str(template.parent))

        j2_loader = jinja2.FileSystemLoader(template_dirs)
        j2_env = jinja2.Environment(loader=j2_loader, trim_blocks=True, lstrip_blocks=True,
                                    keep_trailing_newline=True, undefined=jinja2.StrictUndefined)
        j2_env.filters["fmt"] = format_value
        j2_template = j2_env.get_template(template.name)
        return j2_template.render(_title_=self.title, _fields_=self.fields)


class JsonReport(BaseReport):
    STYLE: ClassVar = "json"

    def render(self) -> str:
        data = {"command": self.title, **dict(self.fields)}
        return json_dumps(data) + "\n"
