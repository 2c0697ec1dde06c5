import logging
from logging.config import dictConfig

from gfdiv.config import get_settings

_RESERVED = frozenset(vars(logging.makeLogRecord({}))) | {"message", "asctime"}


class ContextFormatter(logging.Formatter):
    """Standard line plus the ``extra=`` fields as sorted ``key=value`` pairs."""

    def format(self, record: logging.LogRecord) -> str:
        line = super().format(record)
        context = {k: v for k, v in vars(record).items() if k not in _RESERVED}
        if not context:
            return line
        pairs = " ".join(f"{key}={context[key]!r}" for key in sorted(context))
        return f"{line} | {pairs}"


def configure_logging(level: str | None = None) -> logging.Logger:
    resolved = (level or get_settings().log_level).upper()
    dictConfig(
        {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {
                "context": {
                    "()": ContextFormatter,
                    "fmt": "%(asctime)s | %(levelname)s | %(name)s | %(message)s",
                }
            },
            "handlers": {
                "stderr": {
                    "class": "logging.StreamHandler",
                    "formatter": "context",
                    "level": resolved,
                    # stdout carries reports
                    "stream": "ext://sys.stderr",
                }
            },
            "loggers": {
                "gfdiv": {"handlers": ["stderr"], "level": resolved, "propagate": False},
                "": {"handlers": ["stderr"], "level": "WARNING"},
            },
        }
    )
    return logging.getLogger("gfdiv")
