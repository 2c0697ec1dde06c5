import json
import logging
import sys
from collections.abc import Sequence

from gfdiv.cli.parser import build_parser
from gfdiv.cli.render import write_outcome
from gfdiv.cli.specs import load_run_config
from gfdiv.config import get_settings
from gfdiv.exceptions import GFDivError
from gfdiv.logging_config import configure_logging

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERDICT_FAIL = 2


def _report_error(record: dict[str, str]) -> None:
    print(json.dumps(record, sort_keys=True), file=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    logger = logging.getLogger(__name__)
    try:
        args = build_parser().parse_args(argv)
        configure_logging(args.log_level)
        settings = get_settings()
        logger.info(
            "Bootstrapping gfdiv", extra={"env": settings.environment, "command": args.command}
        )
        config = load_run_config(args)
        outcome = args.handler(config)
        write_outcome(outcome, config.format, config.output)
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return EXIT_ERROR
    except GFDivError as exc:
        logger.error("Run failed: %s", exc.message, extra={"error_type": exc.error_type})
        _report_error(exc.to_record())
        return EXIT_ERROR
    except Exception as exc:  # pragma: no cover - unexpected error boundary
        logger.exception("Unexpected error during run")
        _report_error({"status": "error", "error_type": "unexpected", "message": str(exc)})
        return EXIT_ERROR

    if config.strict and outcome.failed:
        logger.warning("Strict mode: a verdict failed", extra={"command": config.command})
        return EXIT_VERDICT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
