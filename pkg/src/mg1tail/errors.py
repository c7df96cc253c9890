# Copyright (C) 2026 by the mg1tail developers
# License: GNU General Public License v3.0 (see LICENSE file for details)

"""Exception hierarchy shared by all mg1tail modules."""

from __future__ import annotations


class MG1Error(Exception):
    """Base class of every error raised by mg1tail"""


class DomainError(MG1Error, ValueError):
    """Argument outside the domain of an operation (rho not in (0,1), t <= 0, ...)"""


class UnsupportedOrderError(MG1Error, ValueError):
    """Requested raw moment is infinite for the model parameters"""

    def __init__(self, family: str, order: int, params: dict):
        super().__init__(f"{family}: moment of order {order} is infinite for {params}")
        self.family = family
        self.order = order
        self.params = params


class NoPositiveRootError(MG1Error, ArithmeticError):
    """The truncated polynomial Lambda_rho' has no positive real root"""

    def __init__(self, rho: float, roots):
        super().__init__(f"no positive real root of Lambda_rho' for rho={rho!r} (roots: {roots})")
        self.rho = rho
        self.roots = roots


class RightInverseError(MG1Error, RuntimeError):
    """Bracketing of a right inverse failed, the function does not diverge"""


class BracketingError(MG1Error, RuntimeError):
    """Minimization bracket for C_n could not be established"""


class ConfigError(MG1Error):
    """Invalid model or run configuration"""


class QuadratureWarning(UserWarning):
    """Adaptive quadrature did not reach the requested tolerance; a partial value was returned"""
