#!/usr/bin/env python3
"""
Error identity, majorant, minorant and two-sided estimates.

All quantities are evaluated exactly on separable fields. Notation used in
the docstrings: E = |||grad e_w||| (energy error), F = |||t^(2s-1) e_p|||
(flux error), T1 = |||grad w~ - t^(2s-1) y|||, T2 = |||t^(2s-1) div y|||,
T3 = ||y_t(., 0) + g||.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from .constants import DomainSpec, OrderLike, as_order, friedrichs_constant, kappa
from .errors import DegenerateBasisError, ParameterError
from .fields import (
    GramIntegrator, SeparableField, SeparableFlux, check_in_yg, check_spectral_data, divergence,
    exact_solution, flux_inner, gradient_field, residual_series, satisfies_extension_equation,
    weighted_inner, weighted_norm,
)
from .series import CosSeries, SinSeries, derivative, fractional_norm, inner, l2_norm, neg_laplacian

logger = logging.getLogger(__name__)

IDENTITY_FLOOR = 1e-30
INEQUALITY_SLACK = 1e-12
MAX_CONDITION = 1e12
DEFAULT_ALPHA1 = 0.25
DEFAULT_ALPHA2 = 0.25


@dataclass
class IdentityCheck:
    lhs: float
    rhs: float
    residual: float


@dataclass
class MinorantResult:
    """Lower bound value sqrt(max(M^2, 0)) together with the raw quadratic M^2."""
    value: float
    squared: float

    @property
    def clamped(self) -> bool:
        return self.squared < 0.0


@dataclass
class EstimateReport:
    """Majorant terms plus, when the exact solution is known, the true errors."""
    s: float
    mixed_norm: float
    divergence_term: float
    trace_term: float
    majorant: float
    energy_error: Optional[float] = None
    flux_error: Optional[float] = None
    minorant: Optional[float] = None
    minorant_squared: Optional[float] = None
    identity_lhs: Optional[float] = None
    identity_rhs: Optional[float] = None
    alphas: Tuple[float, ...] = field(default_factory=tuple)

    @property
    def majorant_terms(self) -> Tuple[float, float, float]:
        return (self.mixed_norm, self.divergence_term, self.trace_term)

    @property
    def efficiency(self) -> float:
        """majorant / energy_error, NaN when the error is unknown or zero."""
        if not self.energy_error:
            return float('nan')
        return self.majorant / self.energy_error

    def to_dict(self) -> Dict:
        data = asdict(self)
        data['alphas'] = list(self.alphas)
        return data


@dataclass
class TwoSidedBounds:
    """Right-hand sides of the combined upper and lower estimates; upper fields are None when a1 + a2 >= 1."""
    alpha1: float
    alpha2: float
    upper_rhs: Optional[float]
    lower_rhs: float
    upper_lhs: Optional[float] = None
    lower_lhs: Optional[float] = None

    @property
    def upper_holds(self) -> Optional[bool]:
        if self.upper_lhs is None or self.upper_rhs is None:
            return None
        return holds(self.upper_lhs, self.upper_rhs)

    @property
    def lower_holds(self) -> Optional[bool]:
        if self.lower_lhs is None:
            return None
        return holds(self.lower_rhs, self.lower_lhs)


@dataclass
class TraceErrorBounds:
    """Bounds on ||u~ - u||_s; ``lower`` is None when the lower bound does not apply."""
    upper: float
    lower: Optional[float] = None
    exact: Optional[float] = None

    @property
    def lower_applicable(self) -> bool:
        return self.lower is not None


def holds(smaller: float, larger: float, slack: float = INEQUALITY_SLACK) -> bool:
    """smaller <= larger up to ``slack`` (absolute below 1, relative above)."""
    return smaller <= larger + slack * max(1.0, abs(larger))


def energy_inner(u: SeparableField, v: SeparableField, s: OrderLike,
                 integrator: Optional[GramIntegrator] = None) -> float:
    """int_Q t^(1-2s) grad u . grad v."""
    order = as_order(s)
    return flux_inner(gradient_field(u), gradient_field(v), order.energy_exponent, integrator)


def energy_norm(w: SeparableField, s: OrderLike, integrator: Optional[GramIntegrator] = None) -> float:
    """|||grad w||| in the weight t^(1-2s)."""
    return weighted_norm(gradient_field(w), as_order(s).energy_exponent, integrator)


def mixed_norm_squared(a: SeparableFlux, y: SeparableFlux, s: OrderLike,
                       integrator: Optional[GramIntegrator] = None) -> float:
    """|||a - t^(2s-1) y|||^2 in the weight t^(1-2s)."""
    order = as_order(s)
    if order.is_half:
        return weighted_norm(a - y, 0.0, integrator) ** 2
    sq = (flux_inner(a, a, order.energy_exponent, integrator)
          - 2.0 * flux_inner(a, y, 0.0, integrator)
          + flux_inner(y, y, order.dual_exponent, integrator))
    return max(sq, 0.0)


def energy_functional(w_tilde: SeparableField, g: SinSeries, s: OrderLike,
                      integrator: Optional[GramIntegrator] = None) -> float:
    """J(w~) = 1/2 |||grad w~|||^2 - (g, w~(., 0))."""
    return 0.5 * energy_norm(w_tilde, s, integrator) ** 2 - inner(g, w_tilde.trace())


def flux_error(w_exact: SeparableField, y: SeparableFlux, s: OrderLike,
               integrator: Optional[GramIntegrator] = None) -> float:
    """|||t^(2s-1) (y - p)||| with p = t^(1-2s) grad w."""
    return math.sqrt(mixed_norm_squared(gradient_field(w_exact), y, s, integrator))


def error_identity(w_tilde: SeparableField, y: SeparableFlux, w_exact: SeparableField,
                   g: SinSeries, s: OrderLike,
                   integrator: Optional[GramIntegrator] = None) -> IdentityCheck:
    """
    Both sides of  E^2 + F^2 = T1^2 - 2 int_Q e_w div y - 2 (e_w(., 0), g + y_t(., 0)).
    """
    e_w = w_tilde - w_exact
    lhs = (energy_norm(e_w, s, integrator) ** 2
           + mixed_norm_squared(gradient_field(w_exact), y, s, integrator))
    rhs = (mixed_norm_squared(gradient_field(w_tilde), y, s, integrator)
           - 2.0 * weighted_inner(e_w, divergence(y), 0.0, integrator)
           - 2.0 * inner(e_w.trace(), g + y.t.trace()))
    residual = abs(lhs - rhs) / max(lhs, IDENTITY_FLOOR)
    return IdentityCheck(lhs, rhs, residual)


def hypercircle_bound(w_tilde: SeparableField, y: SeparableFlux, g: SinSeries, s: OrderLike,
                      tol: float = 1e-12, integrator: Optional[GramIntegrator] = None) -> float:
    """T1^2, an upper bound of E^2 for equilibrated y (raises NotInYgError otherwise)."""
    check_in_yg(y, g, tol)
    return mixed_norm_squared(gradient_field(w_tilde), y, s, integrator)


def majorant_terms(w_tilde: SeparableField, y: SeparableFlux, g: SinSeries, s: OrderLike,
                   integrator: Optional[GramIntegrator] = None) -> Tuple[float, float, float]:
    order = as_order(s)
    t1 = math.sqrt(mixed_norm_squared(gradient_field(w_tilde), y, order, integrator))
    t2 = weighted_norm(divergence(y), order.dual_exponent, integrator)
    t3 = l2_norm(y.t.trace() + g)
    return t1, t2, t3


def majorant(w_tilde: SeparableField, y: SeparableFlux, g: SinSeries, s: OrderLike,
             domain: DomainSpec, w_exact: Optional[SeparableField] = None,
             eta: Optional[SeparableField] = None,
             integrator: Optional[GramIntegrator] = None) -> EstimateReport:
    """
    M+ = T1 + C_F T2 + C_F^s kappa_s T3.

    Args:
        w_tilde: Approximate extension
        y: Flux with square-integrable weighted divergence
        g: Neumann datum (C_s f)
        s: Fractional order
        domain: Spatial domain (supplies C_F)
        w_exact: Exact extension, if known; fills in the true errors and the identity
        eta: Test field for the minorant, if any

    Returns:
        EstimateReport with every term
    """
    order = as_order(s)
    c_f = friedrichs_constant(domain)
    t1, t2, t3 = majorant_terms(w_tilde, y, g, order, integrator)
    report = EstimateReport(
        s=order.s, mixed_norm=t1, divergence_term=t2, trace_term=t3,
        majorant=t1 + c_f * t2 + c_f ** order.s * kappa(order) * t3,
    )
    if w_exact is not None:
        identity = error_identity(w_tilde, y, w_exact, g, order, integrator)
        report.energy_error = energy_norm(w_tilde - w_exact, order, integrator)
        report.flux_error = flux_error(w_exact, y, order, integrator)
        report.identity_lhs = identity.lhs
        report.identity_rhs = identity.rhs
    if eta is not None:
        low = minorant(w_tilde, eta, g, order, integrator)
        report.minorant = low.value
        report.minorant_squared = low.squared
    return report


def minorant(w_tilde: SeparableField, eta: SeparableField, g: SinSeries, s: OrderLike,
             integrator: Optional[GramIntegrator] = None) -> MinorantResult:
    """M-^2 = 2 <grad w~, grad eta> - 2 (g, eta(., 0)) - |||grad eta|||^2, reported as sqrt(max(M-^2, 0))."""
    sq = (2.0 * energy_inner(w_tilde, eta, s, integrator)
          - 2.0 * inner(g, eta.trace())
          - energy_norm(eta, s, integrator) ** 2)
    if sq < 0.0:
        logger.debug("minorant quadratic is negative (%.3e); clamped to 0", sq)
    return MinorantResult(math.sqrt(max(sq, 0.0)), sq)


def optimize_minorant(w_tilde: SeparableField, basis: Sequence[SeparableField], g: SinSeries,
                      s: OrderLike, integrator: Optional[GramIntegrator] = None,
                      max_condition: float = MAX_CONDITION) -> Tuple[SeparableField, float]:
    """
    Maximize M-^2 over span(basis) by solving K c = b.

    K is the energy Gram matrix of the basis and b_i = <grad w~, grad b_i> - (g, b_i(., 0)).
    The optimum is eta = sum c_i b_i with M-^2 = b . c.
    """
    if not basis:
        return SeparableField.zero('sin'), 0.0
    order = as_order(s)
    grads = [gradient_field(b) for b in basis]
    n = len(basis)
    K = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            K[i, j] = K[j, i] = flux_inner(grads[i], grads[j], order.energy_exponent, integrator)
    grad_w = gradient_field(w_tilde)
    b = np.array([flux_inner(grad_w, gi, order.energy_exponent, integrator) - inner(g, bi.trace())
                  for gi, bi in zip(grads, basis)])
    condition = float(np.linalg.cond(K))
    if not math.isfinite(condition) or condition > max_condition:
        raise DegenerateBasisError(
            f"minorant basis is degenerate: condition estimate {condition:.3e} exceeds {max_condition:.0e}",
            condition,
        )
    coeffs = linalg.cho_solve(linalg.cho_factor(K), b)
    eta = SeparableField.zero('sin')
    for c, bi in zip(coeffs, basis):
        eta = eta + bi * float(c)
    value_sq = float(np.dot(b, coeffs))
    return eta, math.sqrt(max(value_sq, 0.0))


def two_sided_combined(w_tilde: SeparableField, y: SeparableFlux, g: SinSeries, s: OrderLike,
                       domain: DomainSpec, alpha1: float = DEFAULT_ALPHA1, alpha2: float = DEFAULT_ALPHA2,
                       w_exact: Optional[SeparableField] = None,
                       integrator: Optional[GramIntegrator] = None) -> TwoSidedBounds:
    """
    (1 - a1 - a2) E^2 + F^2 <= T1^2 + C_F^2/a1 T2^2 + C_F^(2s) kappa_s^2/a2 T3^2   (upper)
    (1 + a1 + a2) E^2 + F^2 >= T1^2 - C_F^2/a1 T2^2 - C_F^(2s) kappa_s^2/a2 T3^2   (lower)

    The upper form needs a1 + a2 < 1; for larger weights only the lower side
    is filled in and the upper fields stay None.
    """
    if not (alpha1 > 0 and alpha2 > 0):
        raise ParameterError(f"alpha1 and alpha2 must be positive, got {alpha1}, {alpha2}")
    upper_applies = alpha1 + alpha2 < 1
    if not upper_applies:
        logger.debug("alpha1 + alpha2 = %.3f >= 1; upper estimate skipped", alpha1 + alpha2)
    order = as_order(s)
    c_f = friedrichs_constant(domain)
    t1, t2, t3 = majorant_terms(w_tilde, y, g, order, integrator)
    div_part = c_f ** 2 / alpha1 * t2 ** 2
    trace_part = c_f ** (2 * order.s) * kappa(order) ** 2 / alpha2 * t3 ** 2
    bounds = TwoSidedBounds(
        alpha1, alpha2,
        upper_rhs=t1 ** 2 + div_part + trace_part if upper_applies else None,
        lower_rhs=t1 ** 2 - div_part - trace_part,
    )
    if w_exact is not None:
        e2 = energy_norm(w_tilde - w_exact, order, integrator) ** 2
        f2 = flux_error(w_exact, y, order, integrator) ** 2
        if upper_applies:
            bounds.upper_lhs = (1 - alpha1 - alpha2) * e2 + f2
        bounds.lower_lhs = (1 + alpha1 + alpha2) * e2 + f2
    return bounds


def _pair_sum(vectors: List[np.ndarray], weights: np.ndarray, denominators: np.ndarray) -> float:
    if not vectors:
        return 0.0
    length = max(len(v) for v in vectors)
    X = np.vstack([np.pad(v, (0, length - len(v))) for v in vectors])
    gram = (X * weights[:length]) @ X.T
    return math.fsum((gram / denominators).ravel().tolist())


def spectral_S_N(theta: Sequence[float], psi: Sequence[SinSeries], f: SinSeries, N: int,
                 upsilon: Optional[Sequence[CosSeries]] = None) -> float:
    """
    S_N = |||grad w~ - y||| for the modal flux at s = 1/2, as a double sum over modes.

    Default vector parts give
        S_N^2 = sum_jk gamma_j gamma_k / (theta_j theta_k (theta_j^1/2 + theta_k^1/2)) (rho_j, rho_k)
    with rho_j = psi_j'' + theta_j psi_j. With explicit ``upsilon`` the general form
        S_N^2 = sum_jk ((Q_j, Q_k) + (R_j, R_k)) / (theta_j^1/2 + theta_k^1/2)
    is used, Q_j = theta_j^-1/2 gamma_j psi_j' - Upsilon_j, R_j = gamma_j psi_j + theta_j^-1/2 Upsilon_j'.
    """
    head = check_spectral_data(theta, psi, N)
    if N == 0:
        return 0.0
    roots = np.sqrt(head)
    denominators = np.add.outer(roots, roots)
    gammas = [inner(f, p) for p in psi[:N]]
    if upsilon is None:
        rho = [(p * th - neg_laplacian(p)) * (gm / th) for p, th, gm in zip(psi[:N], head, gammas)]
        sq = _pair_sum([r.coeffs for r in rho], np.full(_width(rho), 0.5), denominators)
        return math.sqrt(max(sq, 0.0))
    if len(upsilon) < N:
        raise ParameterError(f"need N={N} vector parts, got {len(upsilon)}")
    q_parts, r_parts = [], []
    for p, root, gm, ups in zip(psi[:N], roots, gammas, upsilon[:N]):
        q_parts.append(derivative(p) * (gm / root) - ups)
        r_parts.append(p * gm + derivative(ups) * (1.0 / root))
    q_weights = np.full(_width(q_parts), 0.5)
    if len(q_weights):
        q_weights[0] = 1.0
    sq = (_pair_sum([q.coeffs for q in q_parts], q_weights, denominators)
          + _pair_sum([r.coeffs for r in r_parts], np.full(_width(r_parts), 0.5), denominators))
    return math.sqrt(max(sq, 0.0))


def _width(series_list) -> int:
    return max((len(v) for v in series_list), default=0)


def spectral_residual(theta: Sequence[float], psi: Sequence[SinSeries], f: SinSeries, N: int) -> float:
    """|| sum gamma_j theta_j^-1 psi_j'' + f ||."""
    return l2_norm(residual_series(theta, psi, f, N))


def spectral_majorant(theta: Sequence[float], psi: Sequence[SinSeries], f: SinSeries, N: int,
                      domain: DomainSpec) -> float:
    """S_N + C_F^(1/2) times the residual norm; the s = 1/2 majorant of the modal approximation."""
    return (spectral_S_N(theta, psi, f, N)
            + math.sqrt(friedrichs_constant(domain)) * spectral_residual(theta, psi, f, N))


def spectral_a8(theta: Sequence[float], psi: Sequence[SinSeries], f: SinSeries, N: int,
                domain: DomainSpec, alpha: float) -> float:
    """Right side S_N^2 + C_F / alpha * residual^2 of (1 - alpha) E^2 + F^2 <= ... ."""
    if not 0 < alpha < 1:
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")
    return (spectral_S_N(theta, psi, f, N) ** 2
            + friedrichs_constant(domain) / alpha * spectral_residual(theta, psi, f, N) ** 2)


def trace_error_bounds(w_tilde: SeparableField, y: SeparableFlux, eta: Optional[SeparableField],
                       g: SinSeries, s: OrderLike, domain: DomainSpec,
                       w_exact: Optional[SeparableField] = None, f: Optional[SinSeries] = None,
                       integrator: Optional[GramIntegrator] = None) -> TraceErrorBounds:
    """
    Bounds on the error of the fractional solution u~ = w~(., 0).

    upper = kappa_s M+ always; lower = kappa_s M-(eta) only when w~ solves the
    extension equation mode by mode. The exact error uses u = w(., 0) if
    ``w_exact`` is given, else the spectral solution of ``f``.
    """
    order = as_order(s)
    k = kappa(order)
    report = majorant(w_tilde, y, g, order, domain, integrator=integrator)
    bounds = TraceErrorBounds(upper=k * report.majorant)
    if eta is not None and satisfies_extension_equation(w_tilde, order):
        bounds.lower = k * minorant(w_tilde, eta, g, order, integrator).value
    u = None
    if w_exact is not None:
        u = w_exact.trace()
    elif f is not None:
        u = exact_solution(f, order, domain)
    if u is not None:
        bounds.exact = fractional_norm(w_tilde.trace() - u, order, domain)
    return bounds
