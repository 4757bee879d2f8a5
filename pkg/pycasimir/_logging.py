import logging

from typing import Union

# Logger all pycasimir module loggers propagate to
logger = logging.getLogger("pycasimir")


def init_logging(level: Union[int, str] = logging.WARNING):
    """Configure the level of pycasimir's diagnostic output

    A handler writing to standard error is attached the first
    time this is called; later calls only change the level.

    Args:
        level:  logging level as a number or a name e.g. ``"DEBUG"``
    """
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            raise ValueError("Unknown log level")

    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(
            logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        logger.addHandler(handler)

    logger.setLevel(level)
