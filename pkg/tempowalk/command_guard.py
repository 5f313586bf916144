"""
Wraps CLI command drivers so that unhandled failures are reported before they propagate: captured with Sentry,
logged with their traceback, and announced on Slack when Sentry could not take them.
"""

import functools
from collections.abc import Callable
from typing import Any, cast

from tempowalk.errors import TempoWalkError
from tempowalk.sentry import sentry_capture
from tempowalk.slack import slack_notify
from tempowalk.stage_timer import StageTimer
from tempowalk.utils import format_stage_summaries
from tempowalk.walk_logging import log_exception, log_warning

SLOWEST_STAGES_IN_REPORT = 5


class _BaseCommand:
    """
    Plain pass-through wrapper.
    """

    def __init__(self, func: Callable) -> None:
        self.func = func

    def __call__(self, *args: Any, **kwargs: Any) -> Any:  # noqa: ANN401
        return self.func(*args, **kwargs)


class _GuardedCommand(_BaseCommand):
    """
    Wrapper that reports exceptions and re-raises them.
    """

    _force_wrap = False

    def __new__(cls, func: Callable) -> "_GuardedCommand":
        """
        If the guard is applied to the same command more than once, guard only once.

        If _force_wrap is True, always return a real guard, useful for unit tests.
        """
        try:
            if cls._force_wrap or not isinstance(func, _GuardedCommand):
                return super().__new__(cls)

            log_warning("Attempted to guard the same command multiple times")
            return cast(_GuardedCommand, _BaseCommand(func))
        except Exception:
            log_exception("Failed to guard command, returning unguarded")
            return func  # type: ignore[return-value]

    def __init__(self, func: Callable) -> None:
        self.func = func
        functools.update_wrapper(self, func)

    def __call__(self, *args: Any, **kwargs: Any) -> Any:  # noqa: ANN401
        try:
            return self.func(*args, **kwargs)
        except Exception as e:
            command = getattr(self.func, "__name__", "command").removeprefix("cmd_")
            sentry_result = sentry_capture(e, tags={"command": command})
            if isinstance(e, TempoWalkError):
                msg = "Command rejected its input"
            else:
                msg = "Unhandled exception in command"
            log_exception(msg, command=command, sentry_capture_result=sentry_result)
            if not sentry_result:
                timer = kwargs.get("timer")
                slack_notify(
                    msg,
                    e,
                    command=command,
                    sentry_capture_result=sentry_result,
                    additional_context=(
                        format_stage_summaries(timer.summaries(), SLOWEST_STAGES_IN_REPORT)
                        if isinstance(timer, StageTimer)
                        else None
                    ),
                )
            raise


def guarded_command(func: Callable) -> Callable:
    """
    Guards a command driver. Exceptions are reported and then re-raised unchanged.
    """
    return _GuardedCommand(func)
