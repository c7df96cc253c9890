# Copyright (C) 2026 by the mg1tail developers
# License: GNU General Public License v3.0 (see LICENSE file for details)

"""Pareto integrated-tail family package."""

from __future__ import annotations

from .model import ParetoTail

__all__ = ['ParetoTail']
