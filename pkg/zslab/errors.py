# coding: utf-8

import traceback
from typing import Optional, Any
from .serialization import BaseModel
from .util import str_class

import logging
logger = logging.getLogger(__name__)


class Error(Exception):
    pass


class ConfigError(Error):
    pass


class ArgumentError(Error):
    pass


class DeserializeError(Error):
    pass


# group
class NotPrime(Error):
    pass


class BadRank(Error):
    pass


class DimensionMismatch(Error):
    pass


class CoordOutOfRange(Error):
    pass


class RankUnsupported(Error):
    pass


class SingularBasis(Error):
    pass


# sequence
class ParseError(Error):
    def __init__(self, message: str, line_no: int = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class HeaderMissing(ParseError):
    pass


class NotASubsequence(Error):
    pass


class NotSquarefree(Error):
    pass


# subsum engine
class BadK(Error):
    pass


class MemoryCapExceeded(Error):
    pass


class WidthExceeded(Error):
    pass


class LengthGuard(Error):
    pass


# lemmas, character sums and theorems
class BadLength(Error):
    pass


class BadLengthForPart3(BadLength):
    pass


class HasFullLengthZeroSum(Error):
    pass


class HasShortZeroSum(Error):
    pass


class EmptySet(Error):
    pass


class CapViolated(Error):
    pass


class FeasibilityGuard(Error):
    pass


class BadM(Error):
    pass


class NotFound(Error):
    pass


class CaseInapplicable(Error):
    pass


class GenerationFailed(Error):
    pass


class BudgetExceeded(Error):
    def __init__(self, message: str, partial: Any = None):
        super().__init__(message)
        self.partial = partial


class TheoremViolation(Error):
    """
    A proven statement failed on a concrete instance; always an implementation bug.

    Parameters
    ----------
    step : str
        Name of the pipeline step or lemma whose claim failed.

    report : Any, optional
        The report carrying both sides of the failed claim.
    """
    def __init__(self, step: str, message: str = "", report: Any = None):
        self.step = step
        self.report = report
        super().__init__(f"{step}: {message}" if message else step)


class ErrorInfo(BaseModel):
    type_: Optional[str] = None
    value: Optional[str] = None
    trace: Optional[str] = None

    @classmethod
    def from_exception(cls, err: BaseException | tuple | str = None):
        if err is None or isinstance(err, str):
            return cls(trace=err)

        if isinstance(err, BaseException):
            exc_info = (type(err), err, err.__traceback__)
        else:
            exc_info = err
        trace = "".join(traceback.format_exception(*exc_info))
        return cls(type_=str_class(exc_info[0]), value=str(exc_info[1]), trace=trace)

    def __str__(self) -> str:
        return self.trace or ""
