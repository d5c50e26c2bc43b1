"""
fracest_stats - randomized perturbation campaigns and self-verification

Runs series of disturbed-eigenpair trials, aggregates efficiency indexes and
checks the error identities and bounds of fracest_core on random inputs.
"""

__version__ = "1.0.0"

from .experiments import run_series, run_trial, summarize, trial_rng
from .models import PerturbationSpec, SeriesSummary, TrialRecord, validate_perturbation_spec
from .verification import CheckResult, VerificationReport, run_verification

__all__ = [
    'run_series',
    'run_trial',
    'summarize',
    'trial_rng',
    'PerturbationSpec',
    'SeriesSummary',
    'TrialRecord',
    'validate_perturbation_spec',
    'CheckResult',
    'VerificationReport',
    'run_verification',
]
