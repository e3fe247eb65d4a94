# coding: utf-8

import logging
import logging.config
import multiprocessing
from typing import Callable, Iterable, List, Any

from .constants import DEFAULT_LOG_LEVEL, DEFAULT_LOG_LAYOUT
from .environment import Environment

logger = logging.getLogger(__name__)


def _init_logging(log_level, log_layout: str):
    logging.config.dictConfig({
        'version': 1,
        'disable_existing_loggers': False,
        'formatters': {
            'verbose': {
                '()': 'coupling.log.NameTruncatedFormatter',
                'format': log_layout
            },
        },
        'handlers': {
            'console': {
                'class': 'logging.StreamHandler',
                'level': log_level,
                'formatter': 'verbose',
                'stream': 'ext://sys.stderr',
            }
        },
        'root': {
            'level': log_level,
            'handlers': ['console'],
        }
    })


class WorkerPool:
    """
    Map a picklable function over work items, inline or in worker processes.

    Parameters
    ----------
    processes : int, optional
        Worker count; default from :class:`Environment`. ``1`` runs inline.
    """

    def __init__(self, processes: int = None, log_level=None, log_layout: str = None):
        self.processes = max(1, processes or Environment.instance().threads)
        root = logging.getLogger()
        self.log_level = log_level or (root.level if root.level != logging.NOTSET else DEFAULT_LOG_LEVEL)
        self.log_layout = log_layout or DEFAULT_LOG_LAYOUT

    def map(self, func: Callable, items: Iterable, chunksize: int = 1) -> List[Any]:
        items = list(items)
        if self.processes == 1 or len(items) <= 1:
            return [func(item) for item in items]

        logger.debug("dispatch %d items to %d processes", len(items), self.processes)
        with multiprocessing.Pool(self.processes, initializer=_init_logging,
                                  initargs=(self.log_level, self.log_layout)) as pool:
            return pool.map(func, items, chunksize)
