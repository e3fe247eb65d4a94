# coding: utf-8

import os
import sys
import json
import time
import logging
import logging.config
from datetime import datetime
from pathlib import Path
from typing import Callable, List, Tuple, Dict, Any, Optional, TextIO

from . import __version__
from .config import BaseConfig
from .constants import (
    FilePathType, ExitCode, CALLEE_KEY, DEFAULT_LOG_BASENAME, DEFAULT_RUN_RECORD_BASENAME,
)
from .environment import Environment
from .errors import Error, ErrorInfo, TheoremViolation, DeserializeError
from .report import new_report
from .serialization import BaseModel, Field, json_dumps, parse_dict
from .util import str_class

logger = logging.getLogger(__name__)


class CommandOutcome(BaseModel):
    """
    What a command hands back to the program: exit code, report fields in print order
    and the summary stored in the run record.
    """
    exit_code: ExitCode = ExitCode.OK
    fields: List[Tuple[str, Any]] = Field(default_factory=list)
    summary: Dict[str, Any] = Field(default_factory=dict)


class RunRecord(BaseModel):
    command: str
    arguments: List[str]
    seed: int = 0
    version: str
    started_at: datetime
    wall_time: float = 0.0
    exit_code: int = ExitCode.OK.value
    summary: Dict[str, Any] = Field(default_factory=dict)
    artifacts: List[str] = Field(default_factory=list)
    error: Optional[ErrorInfo] = None


class CommandProgram:
    """
    Run one command: set up logging and settings, print its report and emit exactly one run record.

    Parameters
    ----------
    command: str
        Command name, used as report title.

    arguments: List[str]
        The full argument vector, replayable with ``python -m zslab``.

    output_dir: FilePathType, optional
        Where logs, artifacts and ``run_record.json`` go. Without it the record is written to stderr.
    """

    def __init__(self,
                 command: str,
                 arguments: List[str],
                 config: BaseConfig,
                 output_dir: FilePathType = None,
                 seed: int = 0,
                 style: str = None,
                 stream: TextIO = None,
                 ):
        self.command = command
        self.arguments = list(arguments)
        self.config = config
        self.output_dir = Path(output_dir) if output_dir else None
        self.seed = seed
        self.style = style
        self.stream = stream or sys.stdout
        self.artifacts: List[Path] = []

    def enable_logging(self, filename=None):
        log_level, log_layout = self.config.get_log_level_and_layout()
        filename = filename or self.get_default_log_filename()
        handlers = {
            'console': {
                'class': 'logging.StreamHandler',
                'level': log_level,
                'formatter': 'verbose',
                'stream': 'ext://sys.stderr',
            }
        }

        if filename:
            handlers["file_main"] = {
                'class': 'logging.handlers.RotatingFileHandler',
                'level': log_level,
                'formatter': 'verbose',
                'filename': filename,
                'maxBytes': 50000000,
                'backupCount': 99
            }

        log_conf = {
            'version': 1,
            'disable_existing_loggers': False,
            'formatters': {
                'verbose': {
                    '()': 'coupling.log.NameTruncatedFormatter',
                    'format': log_layout
                },
            },
            'handlers': handlers,
            'root': {
                'level': log_level,
                'handlers': list(handlers.keys()),
            }
        }
        logging.config.dictConfig(log_conf)

    def get_default_log_filename(self) -> Optional[str]:
        return os.path.join(self.output_dir, DEFAULT_LOG_BASENAME) if self.output_dir else None

    def artifact(self, basename: str, explicit: FilePathType = None) -> Optional[Path]:
        """
        Register an output file: ``explicit`` if given, else ``basename`` in the output dir, else None.
        """
        if explicit:
            path = Path(explicit)
        elif self.output_dir:
            path = self.output_dir.joinpath(basename)
        else:
            return None
        self.artifacts.append(path)
        return path

    def print_report(self, outcome: CommandOutcome):
        fields = [("command", self.command), ("seed", self.seed)] + list(outcome.fields)
        report = new_report(self.style, title=self.command, fields=fields)
        self.stream.write(report.render())
        self.stream.flush()

    def run(self, func: Callable[["CommandProgram"], CommandOutcome]) -> RunRecord:
        if self.output_dir:
            os.makedirs(self.output_dir, exist_ok=True)
        self.enable_logging()
        record = RunRecord(command=self.command, arguments=self.arguments, seed=self.seed,
                           version=__version__, started_at=datetime.now())
        start = time.perf_counter()
        try:
            Environment.instance().update(**self.config.get_settings())
            outcome = func(self)
            self.print_report(outcome)
            record.exit_code = outcome.exit_code.value
            record.summary = outcome.summary
        except KeyboardInterrupt:
            record.exit_code = ExitCode.INTERRUPTED.value
        except TheoremViolation as err:
            logger.exception("%s: a proven statement failed", self.command)
            print(f"{self.command}: violation: {err}", file=sys.stderr)
            record.exit_code = ExitCode.VIOLATION.value
            record.error = ErrorInfo.from_exception(err)
        except (Error, OSError, ValueError) as err:
            logger.debug("%s failed", self.command, exc_info=True)
            print(f"{self.command}: error: {err}", file=sys.stderr)
            record.exit_code = ExitCode.ERROR.value
            record.error = ErrorInfo.from_exception(err)
        except Exception as err:
            logger.exception(str(err))
            record.exit_code = ExitCode.ERROR.value
            record.error = ErrorInfo.from_exception(err)
        finally:
            record.wall_time = time.perf_counter() - start
            record.artifacts = [str(path) for path in self.artifacts]
            self.emit_record(record)
        return record

    def emit_record(self, record: RunRecord):
        text = json_dumps(record.dict())
        if self.output_dir:
            path = self.output_dir.joinpath(DEFAULT_RUN_RECORD_BASENAME)
            path.write_text(text, encoding="utf-8")
            logger.info("run record: %s", path)
        else:
            sys.stderr.write(text + "\n")


def read_run_record(path: FilePathType) -> RunRecord:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except ValueError as err:
        raise DeserializeError(f"{path} is not JSON: {err}") from err
    # only ever instantiate the record class named by the callee key
    if not isinstance(data, dict) or data.get(CALLEE_KEY) != str_class(RunRecord):
        raise DeserializeError(f"{path} is not a run record")
    try:
        return parse_dict(data)
    except (TypeError, ValueError) as err:
        raise DeserializeError(f"{path}: {err}") from err
