"""Structured logging configuration."""

import logging
import sys
from typing import TextIO, cast

import structlog

from mmassoc.config.settings import settings

_configured = False


class _Stderr:
    """Looks up sys.stderr on every write so redirected streams are followed."""

    def write(self, message: str) -> int:
        return sys.stderr.write(message)

    def flush(self) -> None:
        sys.stderr.flush()


def configure_logging(level: str | None = None, fmt: str | None = None) -> None:
    """(Re)configure structlog for the whole process."""
    global _configured
    level_name = (level or ("DEBUG" if settings.debug else settings.log_level)).upper()
    renderer_name = fmt or settings.log_format
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            structlog.dev.ConsoleRenderer()
            if renderer_name == "console"
            else structlog.processors.JSONRenderer(),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(
            logging.getLevelName(level_name)
        ),
        context_class=dict,
        # stdout carries CSV and result tables
        logger_factory=structlog.PrintLoggerFactory(file=cast(TextIO, _Stderr())),
        cache_logger_on_first_use=False,
    )
    _configured = True


def get_logger(name: str) -> structlog.typing.FilteringBoundLogger:
    """Get a configured logger instance."""
    if not _configured:
        configure_logging()
    # lazy proxy: picks up later reconfiguration (e.g. the CLI --log-level flag)
    logger: structlog.typing.FilteringBoundLogger = structlog.get_logger(name, logger_name=name)
    return logger
