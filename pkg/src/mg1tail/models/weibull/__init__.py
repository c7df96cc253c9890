# Copyright (C) 2026 by the mg1tail developers
# License: GNU General Public License v3.0 (see LICENSE file for details)

"""Weibull integrated-tail family package."""

from __future__ import annotations

from .model import WeibullTail

__all__ = ['WeibullTail']
