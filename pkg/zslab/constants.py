# coding: utf-8

import enum
import logging
from pathlib import Path
from typing import Union, Tuple

PACKAGE_NAME = "zslab"

FilePathType = Union[str, Path]
Coords = Tuple[int, ...]

DEFAULT_LOG_BASENAME = "main.log"
DEFAULT_RUN_RECORD_BASENAME = "run_record.json"
DEFAULT_WITNESS_BASENAME = "witness.seq"
DEFAULT_CATALOG_BASENAME = "catalog.seq"
DEFAULT_LOG_LEVEL = logging.INFO
DEFAULT_LOG_LAYOUT = "%(asctime)-15s [%(levelname)-8s] %(processName)-12s " \
                     "[%(name)20s:%(lineno)4d] - %(message)s"

MEM_CAP_ENV = "ZSLAB_MEM_CAP"
DEFAULT_MEM_CAP = 256 * 1024 * 1024
DEFAULT_THRESHOLD_CAP = 10 ** 9
# 2·p² must stay exact in int64
THRESHOLD_CAP_LIMIT = 2 ** 31 - 1
DEFAULT_RANDOM_ATTEMPTS = 200
DEFAULT_EXHAUSTIVE_MAX_P = 5

# exact 64-bit counting holds 2^s for s <= 62
COUNT_WIDTH_LIMIT = 62
# 2^s stays well inside double range
CHARSUM_LENGTH_LIMIT = 64

REL_TOLERANCE = 1e-9
ENVELOPE_SLACK = 1e-9

# proof normalization "c > 8"
MIN_C_EFF = 9.0

CALLEE_KEY = "()"


class ExitCode(enum.IntEnum):
    OK = 0                      # zero-sumfree / lemma holds / conclusion holds
    NEGATIVE = 1                # zero-sum found or hypothesis fails
    ERROR = 2                   # input, parse or guard error
    VIOLATION = 3               # a proven statement failed on an instance
    INTERRUPTED = 4             # was interrupted by user
