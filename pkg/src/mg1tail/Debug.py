# coding=utf-8
#
# Copyright (C) 2026 by the mg1tail developers
#
# In case of reuse of this source code please do not remove this copyright.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
# GNU General Public License for more details.
#
# For more information on the GNU General Public License see:
# <http://www.gnu.org/licenses/>.


import os
import sys
import logging
from .Version import ID


logger = None
streamer = None
format_string = ID + ": " + "%(levelname)s: %(filename)s: %(funcName)s: %(message)s"
log_levels = {"ERROR": logging.ERROR, "WARNING": logging.WARNING, "INFO": logging.INFO, "DEBUG": logging.DEBUG}
LOG_LEVEL_ENV = "MG1_LOG_LEVEL"


def initLogging():
    global logger
    global streamer
    if not logger:
        logger = logging.getLogger(ID)
        formatter = logging.Formatter(format_string)
        # stdout is reserved for CSV data
        streamer = logging.StreamHandler(sys.stderr)
        streamer.setFormatter(formatter)
        logger.addHandler(streamer)
        logger.propagate = False
        setLogLevel(log_levels.get(os.environ.get(LOG_LEVEL_ENV, "INFO").upper(), logging.INFO))


def setLogLevel(level):
    if isinstance(level, str):
        level = log_levels[level.upper()]
    logger.setLevel(level)
    streamer.setLevel(level)
    logger.debug("level: %s", level)


def get_logger(filename):
    """Child logger of the package logger, named after the calling module file."""
    initLogging()
    name = os.path.splitext(os.path.basename(filename))[0]
    return logger.getChild(name)
