#!/usr/bin/env python3
"""
Finite sine and cosine expansions on (0, 1).

Every x-dependent function in the package (right-hand sides, eigenfunction
approximations, traces, residuals, vector parts of fluxes) is a SinSeries or
a CosSeries. Products of series are never formed; integrals come from
orthogonality.
"""

import math
from typing import Iterable, List, Sequence, Union

import numpy as np

from .constants import DomainSpec, OrderLike, as_order
from .errors import DomainError, SeriesKindError

SQRT2 = math.sqrt(2.0)


class _TrigSeries:
    """Immutable coefficient vector shared by SinSeries and CosSeries."""

    __slots__ = ('_coeffs',)
    kind = ''
    first_mode = 0

    def __init__(self, coeffs: Union[Sequence[float], np.ndarray] = ()):
        arr = np.array(coeffs, dtype=float).reshape(-1)
        if not np.all(np.isfinite(arr)):
            raise DomainError(f"{type(self).__name__} coefficients must be finite")
        arr.setflags(write=False)
        self._coeffs = arr

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def modes(self) -> np.ndarray:
        """Mode numbers m matching ``coeffs`` entry by entry."""
        return np.arange(self.first_mode, self.first_mode + len(self._coeffs))

    @property
    def max_mode(self) -> int:
        """Highest mode with a nonzero coefficient (first_mode - 1 for the zero series)."""
        nz = np.flatnonzero(self._coeffs)
        if len(nz) == 0:
            return self.first_mode - 1
        return int(nz[-1]) + self.first_mode

    def __len__(self) -> int:
        return len(self._coeffs)

    def is_zero(self) -> bool:
        return not np.any(self._coeffs)

    def padded(self, length: int) -> np.ndarray:
        """Coefficients zero-padded (never truncated) to at least ``length`` entries."""
        if length <= len(self._coeffs):
            return np.array(self._coeffs)
        out = np.zeros(length)
        out[:len(self._coeffs)] = self._coeffs
        return out

    def _check_kind(self, other) -> None:
        if type(other) is not type(self):
            raise SeriesKindError(
                f"cannot combine {type(self).__name__} with {type(other).__name__}"
            )

    def __add__(self, other):
        self._check_kind(other)
        n = max(len(self), len(other))
        return type(self)(self.padded(n) + other.padded(n))

    def __sub__(self, other):
        self._check_kind(other)
        n = max(len(self), len(other))
        return type(self)(self.padded(n) - other.padded(n))

    def __neg__(self):
        return type(self)(-self._coeffs)

    def __mul__(self, scalar: float):
        return type(self)(self._coeffs * float(scalar))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        n = max(len(self), len(other))
        return bool(np.array_equal(self.padded(n), other.padded(n)))

    def __hash__(self):
        return hash((self.kind, tuple(np.trim_zeros(self._coeffs, 'b'))))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self._coeffs.tolist()!r})"

    def to_list(self) -> List[float]:
        return self._coeffs.tolist()


class SinSeries(_TrigSeries):
    """sum_m coeffs[m-1] sin(m pi x), m = 1..len; vanishes at x = 0 and x = 1."""

    __slots__ = ()
    kind = 'sin'
    first_mode = 1

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if len(self) == 0:
            return np.zeros_like(x)
        return np.sin(np.multiply.outer(x, self.modes * np.pi)) @ self._coeffs

    def l2_weights(self) -> np.ndarray:
        return np.full(len(self), 0.5)


class CosSeries(_TrigSeries):
    """sum_m coeffs[m] cos(m pi x), m = 0..len-1."""

    __slots__ = ()
    kind = 'cos'
    first_mode = 0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if len(self) == 0:
            return np.zeros_like(x)
        return np.cos(np.multiply.outer(x, self.modes * np.pi)) @ self._coeffs

    def l2_weights(self) -> np.ndarray:
        w = np.full(len(self), 0.5)
        if len(w):
            w[0] = 1.0
        return w


Series = Union[SinSeries, CosSeries]


def series_from_dict(data: dict) -> Series:
    kind = data.get('kind')
    if kind == 'sin':
        return SinSeries(data.get('coeffs', []))
    if kind == 'cos':
        return CosSeries(data.get('coeffs', []))
    raise SeriesKindError(f"unknown series kind {kind!r}")


def series_to_dict(v: Series) -> dict:
    return {'kind': v.kind, 'coeffs': v.to_list()}


def derivative(v: Series) -> Series:
    """d/dx: sin(m pi x) -> m pi cos(m pi x), cos(m pi x) -> -m pi sin(m pi x)."""
    if isinstance(v, SinSeries):
        out = np.zeros(len(v) + 1)
        out[1:] = (v.modes * np.pi) * v.coeffs
        return CosSeries(out)
    if isinstance(v, CosSeries):
        if len(v) <= 1:
            return SinSeries()
        return SinSeries(-(v.modes[1:] * np.pi) * v.coeffs[1:])
    raise SeriesKindError(f"derivative expects a SinSeries or CosSeries, got {type(v).__name__}")


def neg_laplacian(v: SinSeries) -> SinSeries:
    """-d^2/dx^2 of a sine series: coefficient m is scaled by (m pi)^2."""
    if not isinstance(v, SinSeries):
        raise SeriesKindError("neg_laplacian is defined for SinSeries only")
    return SinSeries((v.modes * np.pi) ** 2 * v.coeffs)


def inner(u: Series, v: Series) -> float:
    """L2(0,1) inner product by orthogonality; both arguments must be of the same kind."""
    if type(u) is not type(v) or not isinstance(u, _TrigSeries):
        raise SeriesKindError(
            f"inner product needs two series of the same kind, got "
            f"{type(u).__name__} and {type(v).__name__}"
        )
    n = min(len(u), len(v))
    if n == 0:
        return 0.0
    prod = u.coeffs[:n] * v.coeffs[:n] * u.l2_weights()[:n]
    return math.fsum(prod.tolist())


def l2_norm(v: Series) -> float:
    return math.sqrt(max(inner(v, v), 0.0))


def fractional_norm(v: SinSeries, s: OrderLike, domain: DomainSpec) -> float:
    """||v||_s = (sum_j lambda_j^s (v, phi_j)^2)^(1/2) with (v, phi_j) = coeff_j / sqrt(2)."""
    order = as_order(s)
    if not isinstance(v, SinSeries):
        raise SeriesKindError("fractional_norm is defined for SinSeries only")
    if v.max_mode > domain.max_modes:
        raise DomainError(f"series reaches mode {v.max_mode}, domain caps modes at {domain.max_modes}")
    if len(v) == 0:
        return 0.0
    lam_s = (v.modes * np.pi) ** (2.0 * order.s)
    terms = lam_s * 0.5 * v.coeffs ** 2
    return math.sqrt(math.fsum(terms.tolist()))


def eigenfunction(j: int, domain: DomainSpec) -> SinSeries:
    """phi_j = sqrt(2) sin(j pi x)."""
    if not 1 <= j <= domain.max_modes:
        raise DomainError(f"mode {j} outside 1..{domain.max_modes}")
    coeffs = np.zeros(j)
    coeffs[j - 1] = SQRT2
    return SinSeries(coeffs)


def eigenfunctions(count: int, domain: DomainSpec) -> List[SinSeries]:
    return [eigenfunction(j, domain) for j in range(1, count + 1)]


def build_rhs(m: float, M: int, domain: DomainSpec = None) -> SinSeries:
    """f(x) = sum_{j<=M} j^(-m) sin(j pi x)."""
    domain = domain or DomainSpec()
    if M < 0 or M > domain.max_modes:
        raise DomainError(f"M must lie in 0..{domain.max_modes}, got {M}")
    j = np.arange(1, M + 1, dtype=float)
    return SinSeries(j ** (-float(m)))


def sum_series(items: Iterable[Series], kind: str = 'sin') -> Series:
    """Sum of a (possibly empty) iterable of same-kind series."""
    total = SinSeries() if kind == 'sin' else CosSeries()
    for item in items:
        total = total + item
    return total
