# coding: utf-8

import re
import pydoc

import logging
logger = logging.getLogger(__name__)


def str_class(cls) -> str:
    return f"{cls.__module__}.{cls.__qualname__}"


def locate(path: str):
    obj = pydoc.locate(path)
    if obj is None:
        raise LookupError(f"Can't locate object with path: {path}")
    return obj


_SIZE_PATTERN = re.compile(r"^\s*(\d+)\s*([KMG]?)i?B?\s*$", re.IGNORECASE)
_SIZE_UNITS = {"": 1, "K": 1024, "M": 1024 ** 2, "G": 1024 ** 3}


def parse_size(text: str | int) -> int:
    """
    Parse a byte count such as ``268435456``, ``256M`` or ``1GiB``.
    """
    if isinstance(text, int):
        return text
    match = _SIZE_PATTERN.match(str(text))
    if not match:
        raise ValueError(f"invalid size: {text!r}")
    number, unit = match.groups()
    return int(number) * _SIZE_UNITS[unit.upper()]

