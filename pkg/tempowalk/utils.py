import os
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from tempowalk.stage_timer import StageSummary, StageTiming


def aggregate_stage_timings(timings: "list[StageTiming]") -> "list[StageSummary]":
    """
    Aggregates the durations of all executions of the same stage, keeping first-seen stage order.

    Args:
        timings: A list of stage timings.

    Returns:
        A list of stage summaries.
    """
    from tempowalk.stage_timer import StageSummary

    totals: dict[str, tuple[int, float, int]] = {}
    for timing in timings:
        count, duration, items = totals.get(timing.stage, (0, 0.0, 0))
        totals[timing.stage] = (count + 1, duration + timing.duration, items + timing.items)
    return [StageSummary(stage, *values) for stage, values in totals.items()]


def format_stage_summaries(summaries: "list[StageSummary]", limit: int) -> str:
    """
    Formats stage summaries as a Markdown list, slowest stage first.

    Args:
        summaries: A list of stage summaries.
        limit: The maximum number of stages to include in the output.

    Returns:
        A Markdown string with the formatted summaries.
    """
    if not summaries:
        return "_No pipeline stages were timed_"
    ordered = sorted(summaries, key=lambda summary: summary.total_duration, reverse=True)
    return f"*Top {limit} slowest stage{'s' if limit != 1 else ''}:*\n" + "\n".join(
        f"{idx + 1}. `{summary.stage}`: *{summary.total_duration:.3f}s*, ran"
        f" {summary.execution_count} time{'s' if summary.execution_count != 1 else ''}"
        f" over {summary.total_items} item{'s' if summary.total_items != 1 else ''}"
        for idx, summary in enumerate(ordered[:limit])
    )


def bool_env(var: str) -> bool:
    """
    Returns the boolean value of the environment variable.

    Args:
        var: The name of the environment variable.

    Returns:
        The boolean value of the environment variable.
    """
    return os.getenv(var, "").strip().lower() in ("1", "true", "yes", "on", "y")


def int_env(var: str, default: int) -> int:
    """
    Returns the integer value of the environment variable, or `default` when it is unset or blank.

    Raises:
        ConfigError: If the variable is set to something that is not an integer.
    """
    raw = os.getenv(var, "").strip()
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError:
        from tempowalk.errors import ConfigError

        msg = f"{var} must be an integer, got {raw!r}"
        raise ConfigError(msg) from None
