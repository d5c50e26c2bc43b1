#!/usr/bin/env python3
"""
Seeded self-checks of the error identities and bounds.

Every check draws its inputs from a numpy Generator, evaluates one
identity or inequality per trial and records failures and the largest
residual. ``run_verification`` bundles all checks into a report.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from fracest_core.constants import DomainSpec, extension_constant, friedrichs_constant, kappa
from fracest_core.estimators import (
    DEFAULT_ALPHA1, DEFAULT_ALPHA2, INEQUALITY_SLACK, energy_functional, energy_norm, error_identity,
    flux_error, holds, hypercircle_bound, majorant, minorant, optimize_minorant, trace_error_bounds,
    two_sided_combined,
)
from fracest_core.fields import (
    SeparableField, SeparableFlux, StreamMode, Term, approx_extension, candidate_flux,
    exact_extension, exact_flux, gradient_field, stream_flux, weighted_norm, yg_flux,
)
from fracest_core.quadrature import QuadratureSpec, quad_weighted_norm
from fracest_core.series import CosSeries, SinSeries, build_rhs, eigenfunctions, fractional_norm, l2_norm
from .experiments import perturb_eigenfunctions, perturb_eigenvalues, run_trial
from .models import PerturbationSpec

logger = logging.getLogger(__name__)

DEFAULT_ORDERS = (0.3, 0.5, 0.7)


@dataclass
class CheckResult:
    name: str
    trials: int = 0
    failures: int = 0
    max_residual: float = 0.0
    tolerance: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.trials > 0

    def record(self, residual: float, ok: bool) -> None:
        self.trials += 1
        if not ok:
            self.failures += 1
        if math.isfinite(residual):
            self.max_residual = max(self.max_residual, residual)
        else:
            self.max_residual = float('inf')


@dataclass
class VerificationReport:
    seed: int
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_text(self) -> str:
        lines = [f"Verification (seed {self.seed}):"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"  {status}  {c.name:<28} trials={c.trials:<4d} failures={c.failures:<4d} "
                         f"max residual={c.max_residual:.3e} (tol {c.tolerance:.0e})")
        lines.append("All checks passed" if self.passed else "Some checks FAILED")
        return "\n".join(lines)

    def to_dict(self) -> Dict:
        return {
            'seed': self.seed,
            'passed': self.passed,
            'checks': [
                {'name': c.name, 'trials': c.trials, 'failures': c.failures,
                 'max_residual': c.max_residual, 'tolerance': c.tolerance, 'passed': c.passed}
                for c in self.checks
            ],
        }


# ---------------------------------------------------------------- random inputs

def random_sin_series(rng: np.random.Generator, max_mode: int, scale: float = 1.0) -> SinSeries:
    modes = np.arange(1, max_mode + 1)
    return SinSeries(scale * rng.normal(size=max_mode) / modes)


def random_cos_series(rng: np.random.Generator, max_mode: int, scale: float = 1.0) -> CosSeries:
    modes = np.arange(0, max_mode + 1)
    return CosSeries(scale * rng.normal(size=max_mode + 1) / (1 + modes))


def random_field(rng: np.random.Generator, n_terms: int = 3, max_mode: int = 4, max_power: int = 1,
                 rates=(0.5, 8.0), scale: float = 1.0) -> SeparableField:
    """Sum of random sine-series terms with random powers and rates."""
    terms = [Term(random_sin_series(rng, max_mode, scale), int(rng.integers(0, max_power + 1)),
                  float(rng.uniform(*rates)))
             for _ in range(n_terms)]
    return SeparableField(terms, 'sin')


def random_flux(rng: np.random.Generator, n_terms: int = 2, max_mode: int = 4, max_power: int = 1,
                rates=(0.5, 8.0), scale: float = 1.0) -> SeparableFlux:
    """Flux with random cosine and sine components; generally not divergence free."""
    x_terms = [Term(random_cos_series(rng, max_mode, scale), int(rng.integers(0, max_power + 1)),
                    float(rng.uniform(*rates))) for _ in range(n_terms)]
    t_terms = [Term(random_sin_series(rng, max_mode, scale), int(rng.integers(0, max_power + 1)),
                    float(rng.uniform(*rates))) for _ in range(n_terms)]
    return SeparableFlux(SeparableField(x_terms, 'cos'), SeparableField(t_terms, 'sin'))


def random_stream_modes(rng: np.random.Generator, count: int = 2, max_mode: int = 4,
                        amplitude: float = 0.05) -> List[StreamMode]:
    return [StreamMode(int(rng.integers(0, max_mode + 1)), float(rng.uniform(1.0, 6.0)),
                       float(amplitude * rng.normal())) for _ in range(count)]


class SpectralCase(NamedTuple):
    """Exact and disturbed modal data of one randomized s = 1/2 problem."""
    domain: DomainSpec
    f: SinSeries
    N: int
    theta: np.ndarray
    psi: List[SinSeries]
    w: SeparableField
    p: SeparableFlux
    w_tilde: SeparableField
    y: SeparableFlux


def random_spectral_case(rng: np.random.Generator, domain: Optional[DomainSpec] = None,
                         amplitudes=(0.05, 0.2)) -> SpectralCase:
    """Random right-hand side with disturbed eigenpairs and the resulting w~ and modal flux."""
    domain = domain or DomainSpec()
    M = int(rng.integers(2, 7))
    N = int(rng.integers(1, M + 1))
    f = build_rhs(float(rng.choice([1.0, 1.5, 2.0])), M, domain)
    lam = domain.eigenvalues(M)
    theta = perturb_eigenvalues(lam, float(rng.uniform(*amplitudes)), rng)
    psi = perturb_eigenfunctions(eigenfunctions(M, domain), float(rng.uniform(*amplitudes)), rng, domain)
    w = exact_extension(f, domain)
    return SpectralCase(domain, f, N, theta, psi, w, exact_flux(w), approx_extension(theta, psi, f, N),
                        candidate_flux(theta, psi, f, N))


# ---------------------------------------------------------------- checks

def check_error_identity(rng: np.random.Generator, trials: int = 200, tol: float = 1e-10) -> CheckResult:
    """Error identity with the modal flux plus stream and non-solenoidal perturbations."""
    result = CheckResult("error identity", tolerance=tol)
    for i in range(trials):
        case = random_spectral_case(rng)
        y = case.y + stream_flux(random_stream_modes(rng))
        if i % 2:
            y = y + random_flux(rng, scale=0.05)
        check = error_identity(case.w_tilde, y, case.w, case.f, 0.5)
        result.record(check.residual, check.residual < tol)
    return result


def check_hypercircle(rng: np.random.Generator, trials: int = 50, tol: float = 1e-12) -> CheckResult:
    """Equilibrated fluxes: E^2 + F^2 = T1^2 and E^2 <= T1^2."""
    result = CheckResult("hypercircle", tolerance=tol)
    for _ in range(trials):
        case = random_spectral_case(rng)
        y = yg_flux(case.p, case.f, random_stream_modes(rng, amplitude=0.2))
        bound = hypercircle_bound(case.w_tilde, y, case.f, 0.5)
        e2 = energy_norm(case.w_tilde - case.w, 0.5) ** 2
        f2 = flux_error(case.w, y, 0.5) ** 2
        residual = abs(e2 + f2 - bound) / max(bound, 1e-30)
        result.record(residual, residual <= tol and holds(e2, bound))
    return result


def check_ordering(rng: np.random.Generator, trials: int = 50, tol: float = 1e-12,
                   majorant_scale: float = 1.0) -> CheckResult:
    """
    minorant(eta) <= E <= majorant, with equality for y = p and eta = w~ - w.

    ``majorant_scale`` multiplies the majorant before comparison; values below
    one inject a deliberate fault for harness self-tests.
    """
    result = CheckResult("majorant/minorant ordering", tolerance=tol)
    for _ in range(trials):
        case = random_spectral_case(rng)
        e_w = case.w_tilde - case.w
        y = case.y + stream_flux(random_stream_modes(rng)) + random_flux(rng, scale=0.02)
        report = majorant(case.w_tilde, y, case.f, 0.5, case.domain, w_exact=case.w,
                          eta=random_field(rng, scale=0.05))
        energy = report.energy_error
        upper = report.majorant * majorant_scale
        ok = holds(report.minorant, energy) and holds(energy, upper)

        sharp_upper = majorant(case.w_tilde, case.p, case.f, 0.5, case.domain).majorant * majorant_scale
        sharp_lower = minorant(case.w_tilde, e_w, case.f, 0.5).value
        residual = max(abs(sharp_upper - energy), abs(sharp_lower - energy)) / energy
        ok = ok and residual <= tol

        basis = [random_field(rng, n_terms=1, scale=0.1) for _ in range(3)]
        _, small = optimize_minorant(case.w_tilde, basis[:2], case.f, 0.5)
        _, large = optimize_minorant(case.w_tilde, basis, case.f, 0.5)
        ok = ok and holds(small, large) and holds(large, energy)
        result.record(residual, ok)
    return result


def check_two_sided(rng: np.random.Generator, trials: int = 50, alpha1: float = DEFAULT_ALPHA1,
                    alpha2: float = DEFAULT_ALPHA2) -> CheckResult:
    """Combined upper and lower estimates; the upper side is skipped when alpha1 + alpha2 >= 1."""
    result = CheckResult("two-sided estimates", tolerance=INEQUALITY_SLACK)
    for _ in range(trials):
        case = random_spectral_case(rng)
        y = case.y + stream_flux(random_stream_modes(rng)) + random_flux(rng, scale=0.05)
        bounds = two_sided_combined(case.w_tilde, y, case.f, 0.5, case.domain, alpha1, alpha2,
                                    w_exact=case.w)
        result.record(0.0, bounds.upper_holds is not False and bool(bounds.lower_holds))
    return result


def check_energy_identity(rng: np.random.Generator, trials: int = 50, tol: float = 1e-12) -> CheckResult:
    """J(w~) - J(w) = 1/2 |||grad (w~ - w)|||^2."""
    result = CheckResult("energy identity", tolerance=tol)
    domain = DomainSpec()
    for _ in range(trials):
        f = random_sin_series(rng, int(rng.integers(1, 7)))
        w = exact_extension(f, domain)
        w_tilde = w + random_field(rng, scale=0.1)
        half_e2 = 0.5 * energy_norm(w_tilde - w, 0.5) ** 2
        gap = energy_functional(w_tilde, f, 0.5) - energy_functional(w, f, 0.5)
        residual = abs(gap - half_e2) / max(half_e2, 1e-30)
        result.record(residual, residual <= tol)
    return result


def check_lemmas(rng: np.random.Generator, trials: int = 100, orders: Sequence[float] = DEFAULT_ORDERS,
                 tol: float = 1e-12) -> CheckResult:
    """Weighted Friedrichs, trace energy and trace L2 inequalities; trace energy equality at s = 1/2."""
    result = CheckResult("trace and Friedrichs lemmas", tolerance=tol)
    domain = DomainSpec()
    c_f = friedrichs_constant(domain)
    for s in orders:
        c_s, k_s = extension_constant(s), kappa(s)
        for _ in range(trials):
            w = random_field(rng, max_power=2)
            grad = energy_norm(w, s)
            trace = w.trace()
            ok = (holds(weighted_norm(w, 1.0 - 2.0 * s), c_f * grad)
                  and holds(c_s * fractional_norm(trace, s, domain) ** 2, grad ** 2)
                  and holds(l2_norm(trace), c_f ** s * k_s * grad))
            result.record(0.0, ok)
    for _ in range(trials):
        f = random_sin_series(rng, int(rng.integers(1, 9)))
        w = exact_extension(f, domain)
        lhs = fractional_norm(w.trace(), 0.5, domain) ** 2
        rhs = energy_norm(w, 0.5) ** 2
        residual = abs(lhs - rhs) / max(rhs, 1e-30)
        result.record(residual, residual <= tol)
    return result


def check_trace_bounds(rng: np.random.Generator, trials: int = 50) -> CheckResult:
    """Exact fractional trace error never exceeds kappa_s times the majorant."""
    result = CheckResult("trace error bounds", tolerance=0.0)
    for _ in range(trials):
        case = random_spectral_case(rng)
        bounds = trace_error_bounds(case.w_tilde, case.y, case.w_tilde - case.w, case.f, 0.5,
                                    case.domain, f=case.f)
        ok = holds(bounds.exact, bounds.upper)
        if bounds.lower is not None:
            ok = ok and holds(bounds.lower, bounds.exact)
        result.record(0.0, ok)
    return result


def check_exact_data(tol: float = 1e-14) -> CheckResult:
    """Undisturbed eigenpairs with N = M give zero error and vanishing bounds."""
    result = CheckResult("exact data", tolerance=tol)
    spec = PerturbationSpec(M=12, N=12, delta0=0.0, eps0=0.0, n_trials=1)
    record = run_trial(spec, 1)
    worst = max(record.energy_error, record.flux_error, record.majorant, record.minorant,
                record.trace_error)
    result.record(worst, worst <= tol)
    return result


def check_quadrature_oracle(rng: np.random.Generator, fields_per_order: int = 50,
                            orders: Sequence[float] = DEFAULT_ORDERS, tol: float = 1e-6,
                            spec: Optional[QuadratureSpec] = None, max_error: float = 1e-7) -> CheckResult:
    """Closed-form weighted norms against brute-force quadrature, for fields and their gradients."""
    result = CheckResult("quadrature oracle", tolerance=tol)
    for s in orders:
        exponent = 1.0 - 2.0 * s
        for i in range(fields_per_order):
            w = random_field(rng, n_terms=2, max_power=2)
            target = gradient_field(w) if i % 2 else w
            analytic = weighted_norm(target, exponent)
            quad, error = quad_weighted_norm(target, exponent, spec)
            residual = abs(quad - analytic) / max(analytic, 1e-300)
            result.record(residual, residual < tol and error < max_error)
    return result


def run_verification(seed: int = 2024, trials: int = 200, inject_bug: bool = False,
                     alpha1: float = DEFAULT_ALPHA1, alpha2: float = DEFAULT_ALPHA2,
                     progress: Optional[Callable[[CheckResult], None]] = None) -> VerificationReport:
    """
    Run every check with generators derived from ``seed``.

    Args:
        seed: Root seed
        trials: Trials for the error identity; the other checks scale from it
        inject_bug: Halve the majorant inside the ordering check (harness self-test)
        alpha1: Weight of the divergence term in the two-sided check
        alpha2: Weight of the trace term in the two-sided check
        progress: Optional callback invoked after each check

    Returns:
        VerificationReport
    """
    children = np.random.SeedSequence(seed).spawn(7)
    rngs = [np.random.Generator(np.random.PCG64(c)) for c in children]
    small = max(1, trials // 4)
    report = VerificationReport(seed=seed)
    steps = [
        lambda: check_error_identity(rngs[0], trials),
        lambda: check_hypercircle(rngs[1], small),
        lambda: check_ordering(rngs[2], small, majorant_scale=0.5 if inject_bug else 1.0),
        lambda: check_energy_identity(rngs[3], small),
        lambda: check_lemmas(rngs[4], max(1, trials // 2)),
        lambda: check_trace_bounds(rngs[5], small),
        lambda: check_exact_data(),
        lambda: check_two_sided(rngs[6], small, alpha1, alpha2),
    ]
    for step in steps:
        check = step()
        logger.debug("%s: %d/%d failures", check.name, check.failures, check.trials)
        report.checks.append(check)
        if progress is not None:
            progress(check)
    return report
