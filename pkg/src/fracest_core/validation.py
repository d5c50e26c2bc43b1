#!/usr/bin/env python3
"""
Input validation helpers.
Each validator returns a list of error messages (empty when the input is valid).
"""

import math
from typing import List, Sequence

import numpy as np

from .constants import S_MIN, DomainSpec
from .series import SinSeries


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def validate_order(s, name: str = "s") -> List[str]:
    """Check that s lies in the supported open interval (S_MIN, 1 - S_MIN)."""
    if not _is_number(s):
        return [f"{name}: must be a number, got {type(s).__name__}"]
    if not math.isfinite(s) or not (S_MIN < s < 1.0 - S_MIN):
        return [f"{name}: must lie in ({S_MIN}, {1.0 - S_MIN}), got {s}"]
    return []


def validate_alpha(alpha, name: str = "alpha") -> List[str]:
    if not _is_number(alpha):
        return [f"{name}: must be a number, got {type(alpha).__name__}"]
    if not 0 < alpha < 1:
        return [f"{name}: must lie in (0, 1), got {alpha}"]
    return []


def validate_mode_count(value, name: str, domain: DomainSpec, allow_zero: bool = False) -> List[str]:
    if not isinstance(value, int) or isinstance(value, bool):
        return [f"{name}: must be an integer, got {type(value).__name__}"]
    low = 0 if allow_zero else 1
    if not low <= value <= domain.max_modes:
        return [f"{name}: must lie in {low}..{domain.max_modes}, got {value}"]
    return []


def validate_spectral_data(theta: Sequence[float], psi: Sequence[SinSeries], N: int) -> List[str]:
    """
    Validate approximate eigenpairs for the modal approximation.

    Args:
        theta: Approximate eigenvalues
        psi: Approximate eigenfunctions
        N: Number of modes used

    Returns:
        List of error messages (empty if valid)
    """
    errors = []
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if N < 0:
        errors.append(f"N: must be nonnegative, got {N}")
        return errors
    if len(theta) < N:
        errors.append(f"theta: need at least {N} values, got {len(theta)}")
    if len(psi) < N:
        errors.append(f"psi: need at least {N} functions, got {len(psi)}")
    head = theta[:N]
    if np.any(~np.isfinite(head)) or np.any(head <= 0):
        errors.append("theta: values must be positive and finite")
    elif np.any(np.diff(head) < 0):
        errors.append("theta: values must be nondecreasing")
    for j, p in enumerate(psi[:N]):
        if not isinstance(p, SinSeries):
            errors.append(f"psi[{j}]: must be a SinSeries, got {type(p).__name__}")
    return errors
