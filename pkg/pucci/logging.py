from loguru import logger
import sys

from pucci import settings

logger.remove()

logger.add(sys.stderr, colorize=False, format="{time} {level} {message}", level=settings.LOG_LEVEL)


def configure_logging(level=None, log_path=None):
    """Reset the sinks: stderr at ``level`` plus a rotating file at ``log_path``.

    ``settings.LOG_PATH`` names the file when no path is given; None keeps
    stderr only.
    """
    logger.remove()
    logger.add(sys.stderr, colorize=False, format="{time} {level} {message}",
               level=level or settings.LOG_LEVEL)
    log_path = log_path or settings.LOG_PATH
    if log_path:
        logger.add(log_path, rotation="10 MB", retention="10 days", compression="zip",
                   level="DEBUG")
    return logger
