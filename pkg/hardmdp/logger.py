"""
hardmdp's logger.

Diagnostics go to stderr, stdout is reserved for command output. The
starting level is read from the HARDMDP_LOG environment variable.
"""
import os
import sys
import logging

ENV_VAR = 'HARDMDP_LOG'

# log level options provided by hardmdp
LOG_LEVELS = {
    'DEBUG': logging.DEBUG,
    'INFO': logging.INFO,
    'WARNING': logging.WARNING,
    'ERROR': logging.ERROR
}


def env_verbosity(default='INFO'):
    """
    Verbosity requested through the environment.

    Returns
    -------
    str : The upper-cased level name, or None if HARDMDP_LOG holds an
        unsupported value.
    """
    verbosity = os.environ.get(ENV_VAR, default).strip().upper()
    return verbosity if verbosity in LOG_LEVELS else None


def init_logger(logger, verbosity=None):
    """
    Attach the stderr handler to a fresh logger.

    Parameters
    ----------
    logger : logging.Logger
    verbosity : str
        One of LOG_LEVELS. None reads HARDMDP_LOG; an unsupported value
        there falls back to INFO with a warning.
    """
    if logger.handlers:
        return logger

    requested = env_verbosity() if verbosity is None else str(verbosity).upper()
    level = requested if requested in LOG_LEVELS else 'INFO'
    add_logger_handler(logger, sys.stderr, verbosity=level)
    if requested != level:
        logger.warning(f'Ignoring unsupported {ENV_VAR} value, logging at INFO.')
    return logger


def add_logger_handler(logger, stream, verbosity='INFO'):
    """
    Send the logger output to a stream as well.

    The new handler becomes the last one; its level and the logger's are set
    to verbosity.

    Parameters
    ----------
    logger : logging.Logger
    stream : file-like
        e.g. sys.stderr or an open log file.
    verbosity : str
    """
    handler = logging.StreamHandler(stream)
    handler.setFormatter(hardmdpFormatter())
    logger.addHandler(handler)
    set_log_level(logger, verbosity, -1)
    return logger


def set_log_level(logger, verbosity, handler_id=0):
    """
    Set the level of the logger and of one of its handlers.

    Handler 0 is the stderr handler created by init_logger.

    Parameters
    ----------
    logger : logging.Logger
    verbosity : str
        One of LOG_LEVELS, case-insensitive.
    handler_id : int
        Index in logger.handlers.
    """
    name = str(verbosity).upper()
    if name not in LOG_LEVELS:
        logger.error(f"Unsupported log level '{verbosity}'. "
                     f"Supported: {', '.join(LOG_LEVELS)}.")
        raise ValueError

    logger.setLevel(LOG_LEVELS[name])
    logger.handlers[handler_id].setLevel(LOG_LEVELS[name])


class hardmdpFormatter(logging.Formatter):
    """
    Per-level layout: DEBUG and ERROR carry the source line, INFO is bare.
    """
    formats = {
        logging.DEBUG: '[%(module)s:%(funcName)s:%(lineno)d] DEBUG: %(message)s (%(asctime)s)',
        logging.INFO: '[%(module)s.%(funcName)s] %(message)s',
        logging.WARNING: '[%(module)s.%(funcName)s] WARNING: %(message)s',
        logging.ERROR: '[%(module)s:%(funcName)s:%(lineno)d] ERROR: %(message)s',
    }

    def __init__(self):
        super().__init__()
        self._styles = {level: logging.PercentStyle(fmt) for level, fmt in self.formats.items()}

    def format(self, record):
        level = max((lv for lv in self._styles if lv <= record.levelno), default=logging.DEBUG)
        self._style = self._styles[level]
        self._fmt = self._style._fmt
        return super().format(record)
