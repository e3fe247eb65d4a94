# coding: utf-8

import enum
import contextlib
from typing import List, Optional, Any

from .serialization import BaseModel, Field
from .errors import ErrorInfo, TheoremViolation

import logging
logger = logging.getLogger(__name__)


class StepFailed(AssertionError):
    pass


def require(condition: Any, message: str):
    if not condition:
        raise StepFailed(message)


class StepCheck(BaseModel):
    """
    Outcome of one runtime-asserted step of a proof pipeline.
    """

    class Status(enum.IntEnum):
        NONE = 0
        PASSED = 1
        FAILED = 2

    name: str
    status: Status = Status.NONE
    detail: Optional[str] = None
    error: Optional[ErrorInfo] = None

    def __str__(self):
        return f"<StepCheck(name:{self.name}, status: {self.status.name})>"

    @contextlib.contextmanager
    def catch(self, report: Any = None):
        try:
            yield self
        except StepFailed as err:
            self.status = self.Status.FAILED
            self.error = ErrorInfo.from_exception(err)
            raise TheoremViolation(self.name, str(err), report) from err
        else:
            self.status = self.Status.PASSED
        finally:
            if self.error:
                logger.error("step %s failed: %s", self.name, self.error.value)


class StepChecks(BaseModel):
    steps: List[StepCheck] = Field(default_factory=list)

    @contextlib.contextmanager
    def step(self, name: str, report: Any = None):
        check = StepCheck(name=name)
        self.steps.append(check)
        with check.catch(report):
            yield check
        logger.debug("step %s passed%s", name, f": {check.detail}" if check.detail else "")

    @property
    def passed(self) -> bool:
        return all(step.status == StepCheck.Status.PASSED for step in self.steps)
