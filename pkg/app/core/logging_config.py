import logging
import sys

import structlog

from app.core.config import LogLevel

APP_LOGGER = "app"


def configure_logging(level: LogLevel = LogLevel.WARNING, json_logs: bool = False) -> None:
    """
    Route every `logging.getLogger(__name__)` record under `app` through a single
    stderr handler rendered by structlog. stdout stays free for command output.
    """
    shared_processors = [
        structlog.stdlib.add_log_level,
        structlog.stdlib.add_logger_name,
        structlog.processors.TimeStamper(fmt="iso", utc=True),
    ]
    renderer = (
        structlog.processors.JSONRenderer()
        if json_logs
        else structlog.dev.ConsoleRenderer(colors=False)
    )
    formatter = structlog.stdlib.ProcessorFormatter(
        foreign_pre_chain=shared_processors,
        processors=[
            structlog.stdlib.ProcessorFormatter.remove_processors_meta,
            renderer,
        ],
    )

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(formatter)

    app_logger = logging.getLogger(APP_LOGGER)
    app_logger.handlers[:] = [handler]
    app_logger.setLevel(LogLevel(level).value)
    app_logger.propagate = False
