"""Logger factory shared by tasks, the ensemble runner and the CLI."""

import logging
import sys

LOG_LEVEL_DEBUG = 10
LOG_LEVEL_INFO = 20

_FORMAT = "%(asctime)s %(name)s %(levelname)s: %(message)s"


def get_logger(name: str, level: int = LOG_LEVEL_INFO) -> logging.Logger:
    """
    Return a named logger under the ``slelab`` namespace writing to stderr.

    Repeated calls with the same name reuse the existing handler and only
    update the level.
    """

    lg = logging.getLogger(f"slelab.{name}")
    lg.setLevel(level)

    if not lg.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(_FORMAT))
        lg.addHandler(handler)
        lg.propagate = False

    return lg
