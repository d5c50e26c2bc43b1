#!/usr/bin/env python3
"""
Constants of the extension framework on the unit interval.

Holds the fractional order type, the Dirichlet-Laplacian spectrum of (0, 1),
the extension constant C_s with its inverse square root kappa_s, the
Friedrichs constant and the closed-form weighted time integrals
int_0^inf t^a t^k exp(-c t) dt that every norm in the package reduces to.
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy import special

from .errors import DomainError, InvalidOrderError

S_MIN = 1e-3
DEFAULT_MAX_MODES = 64


@dataclass(frozen=True)
class FractionalOrder:
    """Exponent s of the spectral fractional Laplacian, restricted to (S_MIN, 1 - S_MIN)."""

    s: float

    def __post_init__(self):
        value = float(self.s)
        if not math.isfinite(value) or not (S_MIN < value < 1.0 - S_MIN):
            raise InvalidOrderError(
                f"fractional order must lie in ({S_MIN}, {1.0 - S_MIN}), got {self.s!r}"
            )
        object.__setattr__(self, 's', value)

    @property
    def is_half(self) -> bool:
        return self.s == 0.5

    @property
    def energy_exponent(self) -> float:
        """Weight exponent 1 - 2s of the energy norm."""
        return 1.0 - 2.0 * self.s

    @property
    def dual_exponent(self) -> float:
        """Weight exponent 2s - 1 of flux and divergence norms."""
        return 2.0 * self.s - 1.0

    def __float__(self) -> float:
        return self.s


OrderLike = Union[FractionalOrder, float]


def as_order(s: OrderLike) -> FractionalOrder:
    """Coerce a float (or an existing FractionalOrder) into a FractionalOrder."""
    if isinstance(s, FractionalOrder):
        return s
    return FractionalOrder(s)


@dataclass(frozen=True)
class DomainSpec:
    """
    The interval (0, 1) with Dirichlet eigenpairs phi_j = sqrt(2) sin(j pi x), lambda_j = (j pi)^2.

    ``max_modes`` caps the length of every sine/cosine series built on the domain.
    """

    name: str = "(0,1)"
    max_modes: int = DEFAULT_MAX_MODES

    def __post_init__(self):
        if self.name != "(0,1)":
            raise DomainError(f"only the unit interval (0,1) is supported, got {self.name!r}")
        if int(self.max_modes) < 1:
            raise DomainError(f"max_modes must be positive, got {self.max_modes}")

    def frequency(self, j: int) -> float:
        """Square root of the j-th eigenvalue, j * pi."""
        if j < 1:
            raise DomainError(f"mode index must be >= 1, got {j}")
        return j * np.pi

    def eigenvalue(self, j: int) -> float:
        return self.frequency(j) ** 2

    def eigenvalues(self, count: int) -> np.ndarray:
        """First ``count`` eigenvalues as a float array."""
        if count > self.max_modes:
            raise DomainError(f"requested {count} eigenvalues, domain caps modes at {self.max_modes}")
        return (np.arange(1, count + 1) * np.pi) ** 2

    @property
    def lambda1(self) -> float:
        return self.eigenvalue(1)


def extension_constant(s: OrderLike) -> float:
    """C_s = 2^(1-2s) Gamma(1-s) / Gamma(s)."""
    order = as_order(s)
    value = 2.0 ** (1.0 - 2.0 * order.s) * special.gamma(1.0 - order.s) / special.gamma(order.s)
    return float(value)


def kappa(s: OrderLike) -> float:
    """kappa_s = C_s^(-1/2), the factor bounding the trace error by the energy error."""
    return 1.0 / math.sqrt(extension_constant(s))


def friedrichs_constant(domain: DomainSpec) -> float:
    """C_F = lambda_1^(-1/2), i.e. 1/pi on (0, 1)."""
    return 1.0 / domain.frequency(1)


def weighted_exp_integral(a: float, k: int, c: float) -> float:
    """
    Closed form of int_0^inf t^a t^k exp(-c t) dt.

    Args:
        a: Real weight exponent (1 - 2s or 2s - 1 in practice)
        k: Nonnegative integer power
        c: Decay rate

    Returns:
        Gamma(a + k + 1) / c^(a + k + 1)

    Raises:
        DomainError: if a + k + 1 <= 0 or c <= 0
    """
    p = a + k + 1
    if not p > 0:
        raise DomainError(f"nonconvergent exponent: a + k + 1 = {p} (a={a}, k={k})")
    if not c > 0:
        raise DomainError(f"decay rate must be positive, got {c}")
    return float(special.gamma(p) * c ** (-p))
