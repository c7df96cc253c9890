# Copyright (C) 2026 by the mg1tail developers
# License: GNU General Public License v3.0 (see LICENSE file for details)

"""Registry of the integrated-tail families."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from ..Debug import get_logger
from ..errors import ConfigError
from .base_model import IntegratedTailModel, ModelKind
from .lognormal import LognormalTail
from .pareto import ParetoTail
from .weibull import WeibullTail

logger = get_logger(__file__)

FAMILIES: dict[str, type[IntegratedTailModel]] = {
    "pareto": ParetoTail,
    "weibull": WeibullTail,
    "lognormal": LognormalTail,
}


def load_family_config(family: str) -> dict[str, Any]:
    """Read the config.json shipped with a family package"""
    if family not in FAMILIES:
        raise ConfigError(f"unknown family {family!r}, expected one of {sorted(FAMILIES)}")
    path = Path(__file__).parent / family / "config.json"
    with path.open(encoding="utf-8") as f:
        config = json.load(f)
    logger.debug("family config loaded: %s", path)
    return config


__all__ = [
    'FAMILIES',
    'IntegratedTailModel',
    'LognormalTail',
    'ModelKind',
    'ParetoTail',
    'WeibullTail',
    'load_family_config',
]
