#!/usr/bin/env python3
"""
Brute-force tensor quadrature of weighted integrals over Q.

Independent of the closed-form Gram machinery in ``fields``: fields are
sampled pointwise on Gauss-Legendre panels in x and t. The interval (0, T)
starts with a geometrically graded panel whose innermost piece uses a
Gauss-Jacobi rule absorbing the weight t^a.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import special

from .errors import DomainError
from .fields import AnyField, SeparableField, SeparableFlux

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadratureSpec:
    """Panel layout of the oracle; ``T = None`` picks the truncation from the decay rates."""

    T: Optional[float] = None
    n_x: int = 16
    n_t: int = 32
    nodes: int = 10
    grading_ratio: float = 2.0
    graded_levels: int = 24
    tail_tol: float = 1e-15

    def __post_init__(self):
        if self.T is not None and not self.T > 0:
            raise DomainError(f"T must be positive, got {self.T}")
        for name in ('n_x', 'n_t', 'nodes', 'graded_levels'):
            if int(getattr(self, name)) < 1:
                raise DomainError(f"{name} must be a positive integer, got {getattr(self, name)}")
        if not self.grading_ratio > 1:
            raise DomainError(f"grading_ratio must exceed 1, got {self.grading_ratio}")
        if not self.tail_tol > 0:
            raise DomainError(f"tail_tol must be positive, got {self.tail_tol}")

    def refined(self, extra_nodes: int = 4) -> 'QuadratureSpec':
        return QuadratureSpec(self.T, self.n_x, self.n_t, self.nodes + extra_nodes,
                              self.grading_ratio, self.graded_levels, self.tail_tol)


def _components(field: AnyField) -> List[SeparableField]:
    if isinstance(field, SeparableFlux):
        return [field.x, field.t]
    return [field]


def _panel_rule(edges: np.ndarray, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    ref_x, ref_w = leggauss(nodes)
    left, right = edges[:-1], edges[1:]
    half = 0.5 * (right - left)
    points = (np.outer(half, ref_x) + (0.5 * (right + left))[:, None]).ravel()
    weights = np.outer(half, ref_w).ravel()
    return points, weights


def _x_rule(spec: QuadratureSpec, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    return _panel_rule(np.linspace(0.0, 1.0, spec.n_x + 1), nodes)


def _t_rule(spec: QuadratureSpec, a: float, T: float, mu_max: float, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights (weight t^a already folded in) on (0, T)."""
    width = min(T / spec.n_t, 2.0 / mu_max)
    count = int(math.ceil(T / width))
    uniform = np.linspace(0.0, T, count + 1)
    first = uniform[1]
    graded = first * spec.grading_ratio ** -np.arange(spec.graded_levels, -1, -1, dtype=float)
    innermost = graded[0]

    # innermost piece: Gauss-Jacobi on (0, innermost) with weight t^a
    u, wu = special.roots_jacobi(nodes, 0.0, a)
    jac_t = 0.5 * innermost * (u + 1.0)
    jac_w = wu * (0.5 * innermost) ** (a + 1.0)

    edges = np.concatenate([graded, uniform[2:]])
    pts, wts = _panel_rule(edges, nodes)
    wts = wts * pts ** a
    return np.concatenate([jac_t, pts]), np.concatenate([jac_w, wts])


def _tail_bound(components: List[SeparableField], a: float, T: float) -> float:
    """Bound on int_T^inf t^a |field|^2 from sup|X_i| <= sum |coeffs| and t^k <= t^kmax (T >= 1)."""
    amp = 0.0
    for comp in components:
        amp += sum(float(np.sum(np.abs(t.xpart.coeffs))) for t in comp.terms) ** 2
    terms = [t for comp in components for t in comp.terms]
    mu_min = min(t.rate for t in terms)
    p = a + 2 * max(t.power for t in terms) + 1.0
    c = 2.0 * mu_min
    return amp * float(special.gamma(p) * special.gammaincc(p, c * T)) * c ** (-p)


def _choose_T(components: List[SeparableField], a: float, tail_tol: float) -> float:
    terms = [t for comp in components for t in comp.terms]
    mu_min = min(t.rate for t in terms)
    total = _tail_bound(components, a, 0.0)
    T = max(1.0, 1.0 / mu_min)
    while _tail_bound(components, a, T) > tail_tol * total:
        T *= 1.5
    return T


def _integrate(components: List[SeparableField], spec: QuadratureSpec, a: float, T: float,
               mu_max: float, nodes: int) -> float:
    xs, wx = _x_rule(spec, nodes)
    ts, wt = _t_rule(spec, a, T, mu_max, nodes)
    total = 0.0
    for comp in components:
        if comp.is_zero():
            continue
        values = comp.evaluate_grid(xs, ts)
        total += float(wx @ (values ** 2) @ wt)
    return total


def quad_weighted_norm(field: AnyField, weight_exponent: float,
                       spec: Optional[QuadratureSpec] = None) -> Tuple[float, float]:
    """
    Quadrature value of (int_Q t^a |field|^2)^(1/2) and an error estimate.

    The estimate is the difference to a rule with four more nodes per panel
    plus the truncation tail bound, propagated to the norm.
    """
    spec = spec or QuadratureSpec()
    a = float(weight_exponent)
    if not a > -1.0:
        raise DomainError(f"weight exponent {a} is not integrable at t = 0")
    components = [c for c in _components(field) if not c.is_zero()]
    if not components:
        return 0.0, 0.0
    rates = [t.rate for comp in components for t in comp.terms]
    mu_max = max(rates)
    T = spec.T if spec.T is not None else _choose_T(components, a, spec.tail_tol)
    coarse = _integrate(components, spec, a, T, mu_max, spec.nodes)
    fine = _integrate(components, spec, a, T, mu_max, spec.nodes + 4)
    tail = _tail_bound(components, a, max(T, 1.0))
    err_sq = abs(fine - coarse) + tail
    value = math.sqrt(max(fine, 0.0))
    error = err_sq / (2.0 * value) if value > 0 else math.sqrt(err_sq)
    logger.debug("quadrature on (0, %.3g): value %.16g, error %.3e", T, value, error)
    return value, error
