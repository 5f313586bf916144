"""
This module provides a function for sending a Slack notification when a tempowalk command fails.
"""

import os
from typing import cast


def get_slack_webhook_url() -> str:
    """
    Returns the Slack webhook URL.

    Returns:
        The Slack webhook URL.
    """
    if "tempowalk_slack_webhook_url" in globals():
        return cast(str, globals()["tempowalk_slack_webhook_url"])
    slack_webhook_url = os.environ.get("TEMPOWALK_SLACK_WEBHOOK_URL")
    if not slack_webhook_url:
        msg = "TEMPOWALK_SLACK_WEBHOOK_URL environment variable nor global variable are not set"
        raise ValueError(msg)
    return slack_webhook_url


def slack_notify(
    context_message: str,
    e: Exception,
    *,
    command: str | None = None,
    sentry_capture_result: bool | None = None,
    message_title: str | None = None,
    additional_context: str | None = None,
) -> None:
    """
    Sends a Slack notification with error details.

    Args:
        context_message: A message describing the context of the error.
        e: The exception that was raised.
        command: The name of the command that failed, e.g. "replay".
        sentry_capture_result: The result of attempting to capture the exception with Sentry.
        message_title: The title of the Slack message.
        additional_context: Additional Markdown context, e.g. the slowest pipeline stages of the failed run.

    Returns:
        None.
    """
    try:
        slack_webhook_url = get_slack_webhook_url()
    except ValueError:
        from tempowalk.walk_logging import log_warning

        log_warning("Slack webhook URL is not set, skipping Slack notification")
        return

    import requests

    from tempowalk.walk_logging import log_error, log_exception

    env = os.environ.get("TEMPOWALK_ENV", "unknown").upper()

    main_context = []
    if command:
        main_context.append({"type": "mrkdwn", "text": f":point_right: *Command:* {command}"})
    main_context.append({"type": "mrkdwn", "text": f":point_right: *Error type:* {type(e).__name__}"})

    if not message_title:
        message_title = "Walk pipeline failed"

    blocks = [
        {
            "type": "header",
            "text": {"type": "plain_text", "text": f"[{env}] {message_title} :hear_no_evil:"},
        },
        {
            "type": "context",
            "elements": [{"type": "plain_text", "text": context_message}],
        },
        {"type": "divider"},
        {
            "type": "section",
            "text": {"type": "plain_text", "text": f":face_palm: {e}"},
        },
        {"type": "context", "elements": main_context},
    ]

    if additional_context:
        blocks.append({"type": "section", "text": {"type": "mrkdwn", "text": additional_context}})

    if sentry_capture_result is not None:
        blocks.append(
            {
                "type": "section",
                "text": {
                    "type": "plain_text",
                    "text": (
                        ":rage: There also was an error sending the event to Sentry."
                        if not sentry_capture_result
                        else ":ok_hand: The error has been sent to Sentry."
                    ),
                },
            },
        )

    slack_message = {
        "text": f"[{env}] tempowalk: {message_title} :pleading_face:",
        "attachments": [{"color": "#e12424", "blocks": blocks}],
    }

    try:
        response = requests.post(slack_webhook_url, json=slack_message, timeout=15)

        if response.status_code != 200:  # noqa: PLR2004
            log_error(f"Failed to send Slack message: {response.text}", message=slack_message)
    except Exception:
        log_exception("Slack message sending exception", message=slack_message)
