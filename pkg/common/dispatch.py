"""Run one task over many argument lists.

Locally each call goes through ``task.apply`` (synchronous, in-process);
with ``GERBE_PARALLEL=celery`` the calls are sent as a Celery group and the
results are collected in submission order.
"""

from __future__ import annotations

from typing import Any, List, Sequence

from celery import group
from celery.utils.log import get_logger

from common.config import get_settings

logger = get_logger(__name__)


def map_tasks(task: Any, arg_lists: Sequence[Sequence[Any]]) -> List[Any]:
    settings = get_settings()
    if not arg_lists:
        return []
    if settings.parallel == "celery" and not settings.always_eager:
        logger.info("Dispatching %d %s calls as a group", len(arg_lists), task.name)
        result = group(task.s(*args) for args in arg_lists).apply_async()
        return list(result.get(timeout=settings.task_timeout))
    return [task.apply(args=list(args)).get() for args in arg_lists]
