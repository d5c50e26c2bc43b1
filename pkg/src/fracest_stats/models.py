#!/usr/bin/env python3
"""
Data models for randomized perturbation campaigns.
"""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional

from fracest_core.constants import DEFAULT_MAX_MODES, DomainSpec
from fracest_core.validation import validate_alpha, validate_mode_count

GROWTH_RULES = ('linear', 'constant')
NEIGHBOUR_RULES = ('lower', 'adjacent')

# Mode i is disturbed in proportion to (i / M)^1.5 and psi_i mixes only with
# the two modes below it. With these amplitudes delta_max ~ delta0 / 4 and
# eps_max ~ eps0 stay in 0.002-0.012 and 0.010-0.048.
DEFAULT_DELTA0 = 0.02
DEFAULT_EPS0 = 0.03
DEFAULT_MODE_EXPONENT = 1.5
DEFAULT_NEIGHBOURS = 'lower'
SEED_MAX = 2 ** 64 - 1


@dataclass
class PerturbationSpec:
    """Configuration of one series of perturbed trials."""
    M: int = 12
    N: int = 12
    m: float = 1.0
    delta0: float = DEFAULT_DELTA0
    eps0: float = DEFAULT_EPS0
    n_trials: int = 80
    alpha: float = 0.5
    seed: int = 20240101
    growth: str = 'linear'
    max_modes: int = DEFAULT_MAX_MODES
    mode_exponent: float = DEFAULT_MODE_EXPONENT
    neighbours: str = DEFAULT_NEIGHBOURS

    def amplitude(self, base: float, k: int) -> float:
        """Disturbance amplitude of trial k (1-based) for a base amplitude."""
        if self.growth == 'constant':
            return base
        return base * k / self.n_trials

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'PerturbationSpec':
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"Unknown perturbation keys: {', '.join(sorted(unknown))}")
        return cls(**data)


def validate_perturbation_spec(spec: PerturbationSpec) -> List[str]:
    """
    Validate a perturbation series configuration.

    Returns:
        List of error messages (empty if valid)
    """
    errors = []
    if not isinstance(spec.max_modes, int) or spec.max_modes < 3:
        errors.append(f"max_modes: must be an integer >= 3, got {spec.max_modes}")
        return errors
    # the adjacent rule borrows the two modes above M
    spare = 2 if spec.neighbours == 'adjacent' else 0
    domain = DomainSpec(max_modes=spec.max_modes - spare)
    errors.extend(validate_mode_count(spec.M, "M", domain))
    errors.extend(validate_mode_count(spec.N, "N", DomainSpec(max_modes=spec.max_modes), allow_zero=True))
    if isinstance(spec.N, int) and isinstance(spec.M, int) and spec.N > spec.M:
        errors.append(f"N: must not exceed M={spec.M}, got {spec.N}")
    if not isinstance(spec.m, (int, float)) or isinstance(spec.m, bool) or not math.isfinite(spec.m):
        errors.append(f"m: must be a finite number, got {spec.m!r}")
    for name in ('delta0', 'eps0'):
        value = getattr(spec, name)
        if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
            errors.append(f"{name}: must be a finite number, got {value!r}")
        elif value < 0:
            errors.append(f"{name}: cannot be negative ({value})")
    if isinstance(spec.delta0, (int, float)) and spec.delta0 >= 1:
        errors.append(f"delta0: must be below 1 so eigenvalues keep their sign, got {spec.delta0}")
    if not isinstance(spec.n_trials, int) or isinstance(spec.n_trials, bool) or spec.n_trials < 1:
        errors.append(f"n_trials: must be a positive integer, got {spec.n_trials!r}")
    errors.extend(validate_alpha(spec.alpha))
    if not isinstance(spec.seed, int) or isinstance(spec.seed, bool) or not 0 <= spec.seed <= SEED_MAX:
        errors.append(f"seed: must be an integer in 0..2^64-1, got {spec.seed!r}")
    if spec.growth not in GROWTH_RULES:
        errors.append(f"growth: must be one of {', '.join(GROWTH_RULES)}, got {spec.growth!r}")
    if spec.neighbours not in NEIGHBOUR_RULES:
        errors.append(f"neighbours: must be one of {', '.join(NEIGHBOUR_RULES)}, got {spec.neighbours!r}")
    exponent = spec.mode_exponent
    if not isinstance(exponent, (int, float)) or isinstance(exponent, bool) or not math.isfinite(exponent) \
            or exponent < 0:
        errors.append(f"mode_exponent: must be a finite number >= 0, got {exponent!r}")
    return errors


@dataclass
class TrialRecord:
    """Outcome of one perturbed trial"""
    k: int
    delta: float
    eps: List[float]
    energy_error: float
    flux_error: float
    majorant: float
    minorant: float
    a8_lhs: float
    a8_rhs: float
    I1: float
    I2: float
    trace_error: float = 0.0
    trace_bound: float = 0.0

    @property
    def eps_max(self) -> float:
        return max(self.eps, default=0.0)

    @property
    def valid(self) -> bool:
        """Trials with zero energy error carry no efficiency information."""
        return self.energy_error > 0 and math.isfinite(self.I1) and math.isfinite(self.I2)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'TrialRecord':
        return cls(**data)


@dataclass
class SeriesSummary:
    """Averaged efficiency indexes of a series, in the column layout n, m, M, N, alpha, I1, I2, delta_max, eps_max."""
    n: int
    m: float
    M: int
    N: int
    alpha: float
    mean_I1: float
    mean_I2: float
    delta_max: float
    eps_max: float
    n_excluded: int = 0
    name: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_text(self) -> str:
        """Format as a one-row table"""
        header = f"{'n':>4} {'m':>5} {'M':>3} {'N':>3} {'alpha':>5} {'I1':>7} {'I2':>7} {'delta_max':>9} {'eps_max':>8}"
        row = (f"{self.n:>4d} {self.m:>5g} {self.M:>3d} {self.N:>3d} {self.alpha:>5g} "
               f"{self.mean_I1:>7.3f} {self.mean_I2:>7.3f} {self.delta_max:>9.3f} {self.eps_max:>8.3f}")
        lines = [header, row]
        if self.n_excluded:
            lines.append(f"({self.n_excluded} trial(s) with zero error excluded from the means)")
        return "\n".join(lines)
