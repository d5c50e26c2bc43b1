#!/usr/bin/env python3
"""
Randomized spectral-perturbation campaigns at s = 1/2.

Each trial disturbs the exact eigenpairs (lambda_j, phi_j) of (0, 1), builds
the modal approximation w~ and its divergence-free flux from the disturbed
pairs, and compares the computable bounds with the true errors.

Random numbers come from numpy's PCG64 generator. Trial k of a series with
seed S draws from the substream SeedSequence([S, k]), so every record depends
only on (spec, k) and never on scheduling.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np

from fracest_core.constants import DomainSpec
from fracest_core.errors import DomainError, ParameterError
from fracest_core.estimators import (
    energy_norm, flux_error, optimize_minorant, spectral_a8, spectral_majorant,
)
from fracest_core.fields import (
    SeparableField, Term, approx_extension, candidate_flux, exact_extension, exact_solution,
)
from fracest_core.series import (
    SinSeries, build_rhs, eigenfunction, eigenfunctions, fractional_norm, l2_norm,
)
from .models import NEIGHBOUR_RULES, PerturbationSpec, SeriesSummary, TrialRecord, validate_perturbation_spec

logger = logging.getLogger(__name__)

HALF = 0.5


def trial_rng(seed: int, k: int) -> np.random.Generator:
    """Generator for trial k of the series seeded with ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(k)])))


def mode_weights(count: int, exponent: float = 0.0) -> np.ndarray:
    """(i / count)^exponent for i = 1..count; all ones for exponent 0."""
    if count == 0:
        return np.zeros(0)
    return (np.arange(1, count + 1) / count) ** float(exponent)


def perturb_eigenvalues(lam: Sequence[float], amplitude: float, rng: np.random.Generator,
                        exponent: float = 0.0) -> np.ndarray:
    """
    theta_i = lambda_i (1 + amplitude w_i u_i), u_i uniform on [-1, 1], sorted and kept positive.

    w_i = (i / len(lam))^exponent scales the disturbance of mode i.
    """
    if not 0 <= amplitude < 1:
        raise ParameterError(f"eigenvalue disturbance amplitude must lie in [0, 1), got {amplitude}")
    lam = np.asarray(lam, dtype=float)
    u = rng.uniform(-1.0, 1.0, size=len(lam))
    if amplitude == 0:
        return lam.copy()
    theta = np.sort(lam * (1.0 + amplitude * mode_weights(len(lam), exponent) * u))
    return np.maximum(theta, np.finfo(float).tiny)


def _neighbours(i: int, rule: str) -> Tuple[int, ...]:
    if rule == 'lower':
        return tuple(j for j in (i - 1, i - 2) if j >= 1)
    if rule == 'adjacent':
        return (2, 3) if i == 1 else (i - 1, i + 1)
    raise ParameterError(f"neighbour rule must be one of {', '.join(NEIGHBOUR_RULES)}, got {rule!r}")


def perturb_eigenfunctions(phi: Sequence[SinSeries], amplitude: float, rng: np.random.Generator,
                           domain: Optional[DomainSpec] = None, exponent: float = 0.0,
                           neighbours: str = 'adjacent') -> List[SinSeries]:
    """
    psi_i = (phi_i + amplitude w_i chi_i) / ||phi_i + amplitude w_i chi_i||.

    chi_i is a random unit-norm combination of two sine modes next to mode i:
    i - 1 and i + 1 (2 and 3 for i = 1) under the 'adjacent' rule, i - 1 and
    i - 2 under the 'lower' rule. The 'lower' rule leaves phi_1 untouched and
    gives phi_2 a random sign multiple of phi_1. w_i is as in perturb_eigenvalues.
    """
    if amplitude < 0:
        raise ParameterError(f"eigenfunction disturbance amplitude must be >= 0, got {amplitude}")
    domain = domain or DomainSpec()
    angles = rng.uniform(0.0, 2.0 * math.pi, size=len(phi))
    if amplitude == 0:
        return list(phi)
    weights = mode_weights(len(phi), exponent)
    psi = []
    for i, (base, angle, weight) in enumerate(zip(phi, angles, weights), start=1):
        modes = _neighbours(i, neighbours)
        if not modes:
            psi.append(base)
            continue
        if max(modes) > domain.max_modes:
            raise DomainError(f"eigenfunction {i} needs mode {max(modes)}, beyond the cap {domain.max_modes}")
        if len(modes) == 1:
            chi = eigenfunction(modes[0], domain) * math.copysign(1.0, math.cos(angle))
        else:
            chi = (eigenfunction(modes[0], domain) * math.cos(angle)
                   + eigenfunction(modes[1], domain) * math.sin(angle))
        raw = base + chi * (amplitude * weight)
        psi.append(raw * (1.0 / l2_norm(raw)))
    return psi


def disturbance_metrics(lam: Sequence[float], theta: Sequence[float], phi: Sequence[SinSeries],
                        psi: Sequence[SinSeries]) -> Tuple[float, np.ndarray]:
    """delta = mean_i |lambda_i - theta_i| / lambda_i and eps_i = ||phi_i - psi_i||."""
    lam = np.asarray(lam, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if not len(lam) == len(theta) == len(phi) == len(psi):
        raise ValueError(
            f"length mismatch: lambda {len(lam)}, theta {len(theta)}, phi {len(phi)}, psi {len(psi)}"
        )
    if len(lam) == 0:
        return 0.0, np.zeros(0)
    delta = math.fsum((np.abs(lam - theta) / lam).tolist()) / len(lam)
    eps = np.array([l2_norm(a - b) for a, b in zip(phi, psi)])
    return delta, eps


def minorant_basis(theta: Sequence[float], N: int) -> List[SeparableField]:
    """Computable test space {sin(j pi x) exp(-theta_j^(1/2) t)}, j <= N."""
    basis = []
    for j in range(1, N + 1):
        coeffs = np.zeros(j)
        coeffs[-1] = 1.0
        basis.append(SeparableField([Term(SinSeries(coeffs), 0, math.sqrt(theta[j - 1]))], 'sin'))
    return basis


def run_trial(spec: PerturbationSpec, k: int, rng: Optional[np.random.Generator] = None) -> TrialRecord:
    """
    Run trial k of a series.

    Args:
        spec: Series configuration
        k: Trial index, 1..n_trials
        rng: Generator to draw from; defaults to the (seed, k) substream

    Returns:
        TrialRecord with errors, bounds and efficiency indexes
    """
    errors = validate_perturbation_spec(spec)
    if errors:
        raise ParameterError("; ".join(errors))
    rng = rng if rng is not None else trial_rng(spec.seed, k)
    domain = DomainSpec(max_modes=spec.max_modes)

    f = build_rhs(spec.m, spec.M, domain)
    lam = domain.eigenvalues(spec.M)
    phi = eigenfunctions(spec.M, domain)
    w = exact_extension(f, domain)

    theta = perturb_eigenvalues(lam, spec.amplitude(spec.delta0, k), rng, spec.mode_exponent)
    psi = perturb_eigenfunctions(phi, spec.amplitude(spec.eps0, k), rng, domain, spec.mode_exponent,
                                 spec.neighbours)
    delta, eps = disturbance_metrics(lam, theta, phi, psi)

    w_tilde = approx_extension(theta, psi, f, spec.N)
    y = candidate_flux(theta, psi, f, spec.N, HALF)

    energy_error = energy_norm(w_tilde - w, HALF)
    f_error = flux_error(w, y, HALF)
    maj = spectral_majorant(theta, psi, f, spec.N, domain)
    _, minor = optimize_minorant(w_tilde, minorant_basis(theta, spec.N), f, HALF)

    a8_lhs = (1.0 - spec.alpha) * energy_error ** 2 + f_error ** 2
    a8_rhs = spectral_a8(theta, psi, f, spec.N, domain, spec.alpha)
    if energy_error > 0:
        I1 = maj / energy_error
        I2 = math.sqrt(a8_rhs / a8_lhs)
    else:
        I1 = I2 = float('nan')

    trace_error = fractional_norm(w_tilde.trace() - exact_solution(f, HALF, domain), HALF, domain)

    logger.debug("trial %d: delta=%.3e eps_max=%.3e E=%.3e I1=%.3f", k, delta,
                 float(np.max(eps)) if len(eps) else 0.0, energy_error, I1)
    return TrialRecord(
        k=k, delta=delta, eps=eps.tolist(), energy_error=energy_error, flux_error=f_error,
        majorant=maj, minorant=minor, a8_lhs=a8_lhs, a8_rhs=a8_rhs, I1=I1, I2=I2,
        trace_error=trace_error, trace_bound=maj,
    )


def _run_trial_args(args: Tuple[PerturbationSpec, int]) -> TrialRecord:
    return run_trial(*args)


def summarize(spec: PerturbationSpec, records: Sequence[TrialRecord], name: Optional[str] = None) -> SeriesSummary:
    """Means over trials with nonzero error; maxima over all trials."""
    valid = [r for r in records if r.valid]
    excluded = len(records) - len(valid)
    if excluded:
        logger.warning("%d trial(s) with zero energy error excluded from the means", excluded)
    mean_i1 = math.fsum(r.I1 for r in valid) / len(valid) if valid else float('nan')
    mean_i2 = math.fsum(r.I2 for r in valid) / len(valid) if valid else float('nan')
    return SeriesSummary(
        n=len(records), m=spec.m, M=spec.M, N=spec.N, alpha=spec.alpha,
        mean_I1=mean_i1, mean_I2=mean_i2,
        delta_max=max((r.delta for r in records), default=0.0),
        eps_max=max((r.eps_max for r in records), default=0.0),
        n_excluded=excluded, name=name,
    )


def run_series(spec: PerturbationSpec, workers: int = 1,
               name: Optional[str] = None) -> Tuple[SeriesSummary, List[TrialRecord]]:
    """
    Run trials 1..n_trials and aggregate them.

    With ``workers > 1`` trials run in a process pool; records are returned in
    trial order either way, so output does not depend on the worker count.
    """
    errors = validate_perturbation_spec(spec)
    if errors:
        raise ParameterError("; ".join(errors))
    jobs = [(spec, k) for k in range(1, spec.n_trials + 1)]
    records: Optional[List[TrialRecord]] = None
    if workers > 1 and len(jobs) > 1:
        try:
            with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as executor:
                records = list(executor.map(_run_trial_args, jobs))
        except (OSError, RuntimeError) as e:
            logger.warning("parallel execution failed (%s), falling back to sequential", e)
            records = None
    if records is None:
        records = [_run_trial_args(job) for job in jobs]
    return summarize(spec, records, name), records
