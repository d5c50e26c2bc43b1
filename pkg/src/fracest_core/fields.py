#!/usr/bin/env python3
"""
Separable fields and fluxes on the half-cylinder Q = (0,1) x (0, inf).

A SeparableField is a finite sum  sum_i X_i(x) t^k_i exp(-mu_i t)  with X_i a
sine series (scalar fields, last flux component) or a cosine series (first
flux component). All weighted integrals over Q are evaluated in closed form:

    int_Q t^a u v = sum_ij (X_i, Y_j) Gamma(a + k_i + l_j + 1) / (mu_i + nu_j)^(a + k_i + l_j + 1)
"""

import logging
import math
import threading
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import special

from .constants import DomainSpec, OrderLike, as_order
from .errors import ConsistencyError, DomainError, NotInYgError, SeriesKindError, UnsupportedOrderError
from .series import (
    CosSeries, Series, SinSeries, derivative, eigenfunctions, inner, neg_laplacian, series_from_dict,
)
from .validation import validate_spectral_data

logger = logging.getLogger(__name__)

MAX_POWER = 4
RATE_RTOL = 1e-14
EQUATION_RTOL = 1e-12

_SERIES_BY_KIND = {'sin': SinSeries, 'cos': CosSeries}


class Term(NamedTuple):
    """One separable term X(x) t^power exp(-rate t)."""
    xpart: Series
    power: int
    rate: float


def _same_rate(a: float, b: float) -> bool:
    return abs(a - b) <= RATE_RTOL * max(1.0, abs(a))


class SeparableField:
    """Immutable sum of separable terms sharing one x-series kind."""

    __slots__ = ('_terms', '_kind')

    def __init__(self, terms: Iterable[Union[Term, Tuple[Series, int, float]]] = (), kind: str = 'sin'):
        if kind not in _SERIES_BY_KIND:
            raise SeriesKindError(f"unknown field kind {kind!r}")
        checked = []
        for raw in terms:
            term = Term(*raw)
            if type(term.xpart) is not _SERIES_BY_KIND[kind]:
                raise SeriesKindError(
                    f"{kind} field cannot hold a {type(term.xpart).__name__} term"
                )
            power = int(term.power)
            if power != term.power or not 0 <= power <= MAX_POWER:
                raise DomainError(f"term power must be an integer in 0..{MAX_POWER}, got {term.power}")
            rate = float(term.rate)
            if not (math.isfinite(rate) and rate > 0):
                raise DomainError(f"term rate must be positive and finite, got {term.rate}")
            checked.append(Term(term.xpart, power, rate))
        self._terms = _merge(checked)
        self._kind = kind

    @classmethod
    def zero(cls, kind: str = 'sin') -> 'SeparableField':
        return cls((), kind)

    @property
    def terms(self) -> Tuple[Term, ...]:
        return self._terms

    @property
    def kind(self) -> str:
        return self._kind

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other: 'SeparableField') -> None:
        if not isinstance(other, SeparableField) or other.kind != self.kind:
            raise SeriesKindError("fields of different kinds cannot be combined")

    def __add__(self, other: 'SeparableField') -> 'SeparableField':
        self._check(other)
        return SeparableField(self._terms + other._terms, self._kind)

    def __sub__(self, other: 'SeparableField') -> 'SeparableField':
        return self + (-other)

    def __neg__(self) -> 'SeparableField':
        return SeparableField([Term(-t.xpart, t.power, t.rate) for t in self._terms], self._kind)

    def __mul__(self, scalar: float) -> 'SeparableField':
        return SeparableField([Term(t.xpart * scalar, t.power, t.rate) for t in self._terms], self._kind)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeparableField):
            return NotImplemented
        if self.kind != other.kind or len(self) != len(other):
            return False
        return all(a.power == b.power and a.rate == b.rate and a.xpart == b.xpart
                   for a, b in zip(self._terms, other._terms))

    __hash__ = None

    def __repr__(self) -> str:
        return f"SeparableField(kind={self._kind!r}, terms={len(self._terms)})"

    def trace(self) -> Series:
        """Value at t = 0: the sum of the power-0 x-parts."""
        total = _SERIES_BY_KIND[self._kind]()
        for term in self._terms:
            if term.power == 0:
                total = total + term.xpart
        return total

    @property
    def max_mode(self) -> int:
        return max((t.xpart.max_mode for t in self._terms), default=0)

    def coefficient_scale(self) -> float:
        """Largest absolute x-coefficient over all terms (0 for the zero field)."""
        return max((float(np.max(np.abs(t.xpart.coeffs))) for t in self._terms if len(t.xpart)), default=0.0)

    def sample_x(self, x) -> np.ndarray:
        """Matrix of x-parts at the points ``x``: shape (len(x), terms)."""
        x = np.asarray(x, dtype=float).reshape(-1)
        if not self._terms:
            return np.zeros((len(x), 0))
        return np.column_stack([t.xpart(x) for t in self._terms])

    def sample_t(self, t) -> np.ndarray:
        """Matrix of time factors t^k exp(-mu t): shape (terms, len(t))."""
        t = np.asarray(t, dtype=float).reshape(-1)
        if not self._terms:
            return np.zeros((0, len(t)))
        return np.vstack([t ** term.power * np.exp(-term.rate * t) for term in self._terms])

    def evaluate_grid(self, x, t) -> np.ndarray:
        """Values on the tensor grid x by t, shape (len(x), len(t))."""
        return self.sample_x(x) @ self.sample_t(t)

    def __call__(self, x, t):
        x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
        out = np.zeros(x.shape)
        for term in self._terms:
            out = out + term.xpart(x) * t ** term.power * np.exp(-term.rate * t)
        return out

    def to_dict(self) -> Dict:
        return {
            'kind': self._kind,
            'terms': [{'power': t.power, 'rate': t.rate, 'coeffs': t.xpart.to_list()} for t in self._terms],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'SeparableField':
        kind = data.get('kind', 'sin')
        terms = [Term(series_from_dict({'kind': kind, 'coeffs': item['coeffs']}), item['power'], item['rate'])
                 for item in data.get('terms', [])]
        return cls(terms, kind)


def _merge(terms: List[Term]) -> Tuple[Term, ...]:
    """Merge terms with equal power and (relatively) equal rate; drop exactly-zero parts."""
    if not terms:
        return ()
    ordered = sorted(terms, key=lambda t: (t.power, t.rate))
    merged: List[Term] = []
    for term in ordered:
        if merged and merged[-1].power == term.power and _same_rate(merged[-1].rate, term.rate):
            last = merged[-1]
            merged[-1] = Term(last.xpart + term.xpart, last.power, last.rate)
        else:
            merged.append(term)
    return tuple(t for t in merged if not t.xpart.is_zero())


class SeparableFlux:
    """Flux (y_x, y_t) with y_x a cosine field and y_t a sine field."""

    __slots__ = ('x', 't')

    def __init__(self, x: Optional[SeparableField] = None, t: Optional[SeparableField] = None):
        x = x if x is not None else SeparableField.zero('cos')
        t = t if t is not None else SeparableField.zero('sin')
        if x.kind != 'cos' or t.kind != 'sin':
            raise SeriesKindError("flux needs a cosine x-component and a sine t-component")
        self.x = x
        self.t = t

    @classmethod
    def zero(cls) -> 'SeparableFlux':
        return cls()

    def is_zero(self) -> bool:
        return self.x.is_zero() and self.t.is_zero()

    def __add__(self, other: 'SeparableFlux') -> 'SeparableFlux':
        return SeparableFlux(self.x + other.x, self.t + other.t)

    def __sub__(self, other: 'SeparableFlux') -> 'SeparableFlux':
        return SeparableFlux(self.x - other.x, self.t - other.t)

    def __neg__(self) -> 'SeparableFlux':
        return SeparableFlux(-self.x, -self.t)

    def __mul__(self, scalar: float) -> 'SeparableFlux':
        return SeparableFlux(self.x * scalar, self.t * scalar)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeparableFlux):
            return NotImplemented
        return self.x == other.x and self.t == other.t

    __hash__ = None

    def __repr__(self) -> str:
        return f"SeparableFlux(x_terms={len(self.x)}, t_terms={len(self.t)})"

    def coefficient_scale(self) -> float:
        return max(self.x.coefficient_scale(), self.t.coefficient_scale())

    def to_dict(self) -> Dict:
        return {'x': self.x.to_dict(), 't': self.t.to_dict()}

    @classmethod
    def from_dict(cls, data: Dict) -> 'SeparableFlux':
        return cls(SeparableField.from_dict(data['x']), SeparableField.from_dict(data['t']))


AnyField = Union[SeparableField, SeparableFlux]


class GramIntegrator:
    """
    Closed-form time integrals with a cache of Gamma values.

    The cache is filled under a lock, so one integrator may be shared by
    worker threads.
    """

    def __init__(self, s: Optional[OrderLike] = None):
        self.order = as_order(s) if s is not None else None
        self._gamma: Dict[float, float] = {}
        self._lock = threading.Lock()

    def gamma(self, p: float) -> float:
        value = self._gamma.get(p)
        if value is None:
            value = float(special.gamma(p))
            with self._lock:
                self._gamma.setdefault(p, value)
        return value

    def time_integral(self, a: float, k: int, c: float) -> float:
        """int_0^inf t^(a+k) exp(-c t) dt, identical to constants.weighted_exp_integral."""
        p = a + k + 1
        if not p > 0:
            raise DomainError(f"nonconvergent exponent: a + k + 1 = {p} (a={a}, k={k})")
        if not c > 0:
            raise DomainError(f"decay rate must be positive, got {c}")
        return self.gamma(p) * c ** (-p)

    def time_gram(self, a: float, powers_u, rates_u, powers_v, rates_v) -> np.ndarray:
        """Matrix of int t^(a + k_i + l_j) exp(-(mu_i + nu_j) t) dt."""
        p = a + np.add.outer(np.asarray(powers_u, dtype=float), np.asarray(powers_v, dtype=float)) + 1.0
        c = np.add.outer(np.asarray(rates_u, dtype=float), np.asarray(rates_v, dtype=float))
        bad = np.argwhere(~(p > 0))
        if len(bad):
            i, j = bad[0]
            raise DomainError(
                f"divergent weighted integral between term {i} (power {powers_u[i]}) and "
                f"term {j} (power {powers_v[j]}) at weight exponent {a}"
            )
        uniq, inverse = np.unique(p, return_inverse=True)
        gammas = np.array([self.gamma(float(q)) for q in uniq])[inverse].reshape(p.shape)
        return gammas * c ** (-p)

    @property
    def cache_size(self) -> int:
        return len(self._gamma)


_DEFAULT_INTEGRATOR = GramIntegrator()


def weighted_inner(u: SeparableField, v: SeparableField, weight_exponent: float = 0.0,
                   integrator: Optional[GramIntegrator] = None) -> float:
    """int_Q t^weight_exponent u v dx dt for two fields of the same kind."""
    if u.kind != v.kind:
        raise SeriesKindError("weighted inner product needs fields of the same kind")
    if u.is_zero() or v.is_zero():
        return 0.0
    integrator = integrator or _DEFAULT_INTEGRATOR
    length = max(max(len(t.xpart) for t in u.terms), max(len(t.xpart) for t in v.terms))
    U = np.vstack([t.xpart.padded(length) for t in u.terms])
    V = np.vstack([t.xpart.padded(length) for t in v.terms])
    weights = _SERIES_BY_KIND[u.kind](np.zeros(length)).l2_weights()
    gx = (U * weights) @ V.T
    gt = integrator.time_gram(
        weight_exponent,
        [t.power for t in u.terms], [t.rate for t in u.terms],
        [t.power for t in v.terms], [t.rate for t in v.terms],
    )
    return math.fsum((gx * gt).ravel().tolist())


def flux_inner(y: SeparableFlux, z: SeparableFlux, weight_exponent: float = 0.0,
               integrator: Optional[GramIntegrator] = None) -> float:
    return (weighted_inner(y.x, z.x, weight_exponent, integrator)
            + weighted_inner(y.t, z.t, weight_exponent, integrator))


def weighted_norm(field: AnyField, weight_exponent: float = 0.0,
                  integrator: Optional[GramIntegrator] = None) -> float:
    """(int_Q t^weight_exponent |field|^2)^(1/2) for a scalar field or a flux."""
    if isinstance(field, SeparableFlux):
        sq = flux_inner(field, field, weight_exponent, integrator)
    else:
        sq = weighted_inner(field, field, weight_exponent, integrator)
    return math.sqrt(max(sq, 0.0))


def _time_derivative_terms(terms: Iterable[Term]) -> List[Term]:
    out = []
    for term in terms:
        if term.power > 0:
            out.append(Term(term.xpart * term.power, term.power - 1, term.rate))
        out.append(Term(term.xpart * (-term.rate), term.power, term.rate))
    return out


def gradient_field(w: SeparableField) -> SeparableFlux:
    """(d/dx w, d/dt w) of a sine field."""
    if w.kind != 'sin':
        raise SeriesKindError("gradient_field expects a sine field")
    x_terms = [Term(derivative(t.xpart), t.power, t.rate) for t in w.terms]
    return SeparableFlux(SeparableField(x_terms, 'cos'), SeparableField(_time_derivative_terms(w.terms), 'sin'))


def divergence(y: SeparableFlux) -> SeparableField:
    """d/dx y_x + d/dt y_t as a sine field."""
    terms = [Term(derivative(t.xpart), t.power, t.rate) for t in y.x.terms]
    terms.extend(_time_derivative_terms(y.t.terms))
    return SeparableField(terms, 'sin')


def satisfies_extension_equation(w: SeparableField, s: OrderLike = 0.5) -> bool:
    """
    True when every term solves w_tt + w_xx = 0 on its own (s = 1/2 only).

    Each term must be a pure exponential (power 0) whose rate matches the
    frequency m pi of every active mode of its x-part.
    """
    if not as_order(s).is_half:
        return False
    for term in w.terms:
        if term.power != 0:
            return False
        active = term.xpart.modes[np.flatnonzero(term.xpart.coeffs)]
        freq2 = (active * np.pi) ** 2
        if np.any(np.abs(term.rate ** 2 - freq2) > EQUATION_RTOL * freq2):
            return False
    return True


def _require_half(s: OrderLike, what: str) -> None:
    if not as_order(s).is_half:
        raise UnsupportedOrderError(f"{what} has a closed form only at s = 1/2, got s = {float(as_order(s).s)}")


def check_spectral_data(theta: Sequence[float], psi: Sequence[SinSeries], N: int) -> np.ndarray:
    errors = validate_spectral_data(theta, psi, N)
    if errors:
        raise DomainError("; ".join(errors))
    return np.asarray(theta, dtype=float).reshape(-1)[:N]


def _modal_parts(theta: np.ndarray, psi: Sequence[SinSeries], f: SinSeries) -> List[Tuple[SinSeries, float]]:
    """x-parts theta_j^(-1/2) gamma_j psi_j and rates theta_j^(1/2)."""
    parts = []
    for th, p in zip(theta, psi):
        gamma_j = inner(f, p)
        root = math.sqrt(th)
        parts.append((p * (gamma_j / root), root))
    return parts


def approx_extension(theta: Sequence[float], psi: Sequence[SinSeries], f: SinSeries, N: int) -> SeparableField:
    """w~ = sum_{j<=N} theta_j^(-1/2) gamma_j psi_j exp(-theta_j^(1/2) t), gamma_j = (f, psi_j)."""
    head = check_spectral_data(theta, psi, N)
    parts = _modal_parts(head, psi[:N], f)
    return SeparableField([Term(x, 0, rate) for x, rate in parts], 'sin')


def exact_extension(f: SinSeries, domain: DomainSpec, s: OrderLike = 0.5) -> SeparableField:
    """Extension of the s = 1/2 solution: the modal sum of approx_extension with exact eigenpairs."""
    _require_half(s, "exact_extension")
    count = f.max_mode
    if count > domain.max_modes:
        raise DomainError(f"f has mode {count} beyond the domain cap {domain.max_modes}")
    if count <= 0:
        return SeparableField.zero('sin')
    return approx_extension(domain.eigenvalues(count), eigenfunctions(count, domain), f, count)


def exact_solution(f: SinSeries, s: OrderLike, domain: DomainSpec) -> SinSeries:
    """u = sum_j lambda_j^(-s) (f, phi_j) phi_j, valid for every s."""
    order = as_order(s)
    if f.max_mode > domain.max_modes:
        raise DomainError(f"f has mode {f.max_mode} beyond the domain cap {domain.max_modes}")
    if len(f) == 0:
        return SinSeries()
    return SinSeries(f.coeffs * (f.modes * np.pi) ** (-2.0 * order.s))


def exact_flux(w: SeparableField, s: OrderLike = 0.5) -> SeparableFlux:
    """p = t^(1-2s) grad w, which stays separable only at s = 1/2."""
    _require_half(s, "exact_flux")
    return gradient_field(w)


class StreamMode(NamedTuple):
    """Stream function chi = amplitude cos(mode pi x) t exp(-rate t)."""
    mode: int
    rate: float
    amplitude: float


def stream_flux(modes: Iterable[StreamMode]) -> SeparableFlux:
    """Divergence-free flux (d/dt chi, -d/dx chi) summed over stream modes; vanishes in y_t at t = 0."""
    x_terms: List[Term] = []
    t_terms: List[Term] = []
    for raw in modes:
        mode = StreamMode(*raw)
        if mode.mode < 0:
            raise DomainError(f"stream mode index must be >= 0, got {mode.mode}")
        cos = np.zeros(mode.mode + 1)
        cos[mode.mode] = mode.amplitude
        chi_x = CosSeries(cos)
        x_terms.append(Term(chi_x, 0, mode.rate))
        x_terms.append(Term(chi_x * (-mode.rate), 1, mode.rate))
        t_terms.append(Term(-derivative(chi_x), 1, mode.rate))
    return SeparableFlux(SeparableField(x_terms, 'cos'), SeparableField(t_terms, 'sin'))


def _flux_tolerances(y: SeparableFlux, tol: float) -> float:
    rates = [t.rate for t in y.x.terms] + [t.rate for t in y.t.terms]
    modes = max(y.x.max_mode, y.t.max_mode, 1)
    freq = max([modes * math.pi] + rates)
    return tol * max(1.0, y.coefficient_scale() * freq)


def yg_defects(y: SeparableFlux, g: SinSeries) -> Tuple[float, float]:
    """Largest coefficient of div y and of y_t(., 0) + g."""
    div = divergence(y)
    trace_defect = y.t.trace() + g
    div_max = div.coefficient_scale()
    trace_max = float(np.max(np.abs(trace_defect.coeffs))) if len(trace_defect) else 0.0
    return div_max, trace_max


def check_in_yg(y: SeparableFlux, g: SinSeries, tol: float = 1e-12) -> None:
    """Raise NotInYgError unless div y = 0 and y_t(., 0) = -g to ``tol`` (scaled)."""
    div_max, trace_max = yg_defects(y, g)
    div_tol = _flux_tolerances(y, tol)
    trace_tol = tol * max(1.0, y.coefficient_scale(), float(np.max(np.abs(g.coeffs))) if len(g) else 0.0)
    if div_max > div_tol:
        raise NotInYgError(f"flux is not divergence free (largest coefficient {div_max:.3e})", div_max)
    if trace_max > trace_tol:
        raise NotInYgError(f"flux does not carry the Neumann datum (defect {trace_max:.3e})", trace_max)


def yg_flux(base: SeparableFlux, g: SinSeries, stream_modes: Iterable[StreamMode] = (),
            tol: float = 1e-12) -> SeparableFlux:
    """
    Member of Y_g built from the first component of ``base``.

    y_t is rebuilt as -g - int_0^t div_x y_x dt'. The constant part of the
    primitive has to cancel -g; otherwise the flux has infinite weighted norm
    and NotInYgError is raised with the size of the leftover series.
    """
    y_x = base.x + stream_flux(stream_modes).x
    constant = g
    t_terms: List[Term] = []
    for term in y_x.terms:
        div_x = derivative(term.xpart)
        k, mu = term.power, term.rate
        fact_k = math.factorial(k)
        constant = constant + div_x * (fact_k / mu ** (k + 1))
        for i in range(k + 1):
            t_terms.append(Term(div_x * (fact_k / (math.factorial(i) * mu ** (k - i + 1))), i, mu))
    residual = float(np.sqrt(0.5 * np.sum(constant.coeffs ** 2))) if len(constant) else 0.0
    scale = max(1.0, float(np.max(np.abs(g.coeffs))) if len(g) else 0.0, y_x.coefficient_scale())
    if residual > tol * scale:
        raise NotInYgError(
            f"flux is not representable in Y_g: constant part leaves a residual of L2 norm {residual:.3e}",
            residual,
        )
    y = SeparableFlux(y_x, SeparableField(t_terms, 'sin'))
    check_in_yg(y, g, tol)
    logger.debug("built Y_g flux with %d + %d terms", len(y.x), len(y.t))
    return y


def candidate_flux(theta: Sequence[float], psi: Sequence[SinSeries], f: SinSeries, N: int,
                   s: OrderLike = 0.5, upsilon: Optional[Sequence[CosSeries]] = None) -> SeparableFlux:
    """
    Divergence-free flux y_x = sum Upsilon_j e_j, y_t = sum theta_j^(-1/2) (d/dx Upsilon_j) e_j.

    e_j = exp(-theta_j^(1/2) t). Without ``upsilon`` the vector parts are
    Upsilon_j = gamma_j theta_j^(-1/2) d/dx psi_j.
    """
    as_order(s)
    head = check_spectral_data(theta, psi, N)
    parts = _modal_parts(head, psi[:N], f)
    if upsilon is not None and len(upsilon) < N:
        raise DomainError(f"need N={N} vector parts, got {len(upsilon)}")
    x_terms, t_terms = [], []
    for j, (xpart, rate) in enumerate(parts):
        ups = derivative(xpart) if upsilon is None else upsilon[j]
        if not isinstance(ups, CosSeries):
            raise SeriesKindError(f"upsilon[{j}] must be a CosSeries")
        x_terms.append(Term(ups, 0, rate))
        t_terms.append(Term(derivative(ups) * (1.0 / rate), 0, rate))
    y = SeparableFlux(SeparableField(x_terms, 'cos'), SeparableField(t_terms, 'sin'))
    div_max = divergence(y).coefficient_scale()
    if div_max > _flux_tolerances(y, 1e-12):
        raise ConsistencyError(f"candidate flux assembled with nonzero divergence ({div_max:.3e})")
    return y


def residual_series(theta: Sequence[float], psi: Sequence[SinSeries], f: SinSeries, N: int) -> SinSeries:
    """sum_{j<=N} gamma_j theta_j^(-1) psi_j'' + f, the Neumann defect of the candidate flux."""
    head = check_spectral_data(theta, psi, N)
    total = f
    for th, p in zip(head, psi[:N]):
        total = total - neg_laplacian(p) * (inner(f, p) / th)
    return total
