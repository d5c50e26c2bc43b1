#!/usr/bin/env python3
"""
Exception types raised by the fracest library.

Value-type failures also derive from ValueError so that callers written
against plain ``except ValueError`` keep working.
"""

from typing import Optional


class FracestError(Exception):
    """Base class for every error raised by fracest."""


class InvalidOrderError(FracestError, ValueError):
    """Fractional order outside the supported open interval."""


class DomainError(FracestError, ValueError):
    """Numerical domain violation: divergent integral, nonpositive rate, bad exponent."""


class UnsupportedOrderError(FracestError, ValueError):
    """Operation that only has a closed form at s = 1/2 was called with another order."""


class ParameterError(FracestError, ValueError):
    """Estimator or perturbation parameter outside its admissible range."""


class SeriesKindError(FracestError, TypeError):
    """Sine and cosine series were mixed in one operation."""


class ConsistencyError(FracestError, ArithmeticError):
    """An assembled object violates an invariant it holds by construction."""


class NotInYgError(FracestError, ValueError):
    """Flux is not divergence free or does not carry the Neumann datum."""

    def __init__(self, message: str, residual: Optional[float] = None):
        super().__init__(message)
        self.residual = residual


class DegenerateBasisError(DomainError):
    """Energy Gram matrix of a minorant basis is singular or ill conditioned."""

    def __init__(self, message: str, condition: Optional[float] = None):
        super().__init__(message)
        self.condition = condition
