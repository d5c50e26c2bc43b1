"""
fracest - command-line harness for functional error bounds of the spectral fractional Laplacian

Runs the self-verification suite, the randomized perturbation series and the
data exports (constants, exact extensions) built on fracest_core and fracest_stats.
"""

__version__ = "1.0.0"

from .config import ConfigError, RunConfig
from .cli import main

__all__ = ['ConfigError', 'RunConfig', 'main']
