#!/usr/bin/env python3
"""
Unified CLI for fracest - functional error bounds for the spectral fractional Laplacian

Commands:
    constants     C_s and kappa_s on a grid of orders (plot data)
    verify        seeded self-checks of the error identities and bounds
    solve         exact s = 1/2 extension sampled on an (x, t) grid
    experiment    one randomized perturbation series (per-trial CSV + summary)
    table         every perturbation series preset in one table
    oracle-check  closed-form weighted norms against brute-force quadrature

Exit codes: 0 success, 1 configuration error, 2 verification failure,
3 numerical domain error, 130 interrupted.
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, resolve_config
from .output import (
    format_number, open_output, write_plot_data, write_summary_csv, write_trials_csv,
)
from .presets import TABLE_PRESETS, list_presets, preset_config, preset_reference
from fracest_core.constants import S_MIN, DomainSpec, extension_constant, kappa
from fracest_core.errors import FracestError
from fracest_core.fields import exact_extension, gradient_field
from fracest_core.series import build_rhs
from fracest_stats.experiments import run_series
from fracest_stats.verification import check_quadrature_oracle, run_verification

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VERIFY = 2
EXIT_DOMAIN = 3


def _flag_overrides(args, keys: List[str]) -> Dict[str, Any]:
    return {key: getattr(args, key) for key in keys if getattr(args, key, None) is not None}


def load_run_config(args, command: str, keys: List[str]) -> RunConfig:
    """Build and validate the RunConfig of a command; raises ConfigError."""
    preset = preset_config(args.preset) if getattr(args, 'preset', None) else None
    config = resolve_config(preset, getattr(args, 'config', None), _flag_overrides(args, keys),
                            getattr(args, 'set', None) or ())
    errors = config.validate(command)
    if errors:
        raise ConfigError("\n".join(errors))
    return config


def _parse_grid(args) -> np.ndarray:
    if args.grid:
        try:
            values = [float(v) for v in args.grid.split(',') if v.strip()]
        except ValueError as e:
            raise ConfigError(f"grid values must be numbers: {e}") from e
        grid = np.array(values)
    else:
        if not args.step > 0:
            raise ConfigError(f"step must be positive, got {args.step}")
        count = int(round((args.stop - args.start) / args.step)) + 1
        grid = args.start + args.step * np.arange(max(count, 0))
    if len(grid) == 0:
        raise ConfigError("empty grid of orders")
    bad = grid[(grid <= S_MIN) | (grid >= 1.0 - S_MIN)]
    if len(bad):
        raise ConfigError(f"grid values must lie in ({S_MIN}, {1.0 - S_MIN}); offending: "
                          + ", ".join(format_number(float(v)) for v in bad))
    return grid


def cmd_constants(args) -> int:
    """Handle 'fracest constants' - C_s and kappa_s as plot data"""
    grid = _parse_grid(args)
    rows = [(float(s), extension_constant(float(s)), kappa(float(s))) for s in grid]
    with open_output(args.output) as handle:
        write_plot_data(handle, ['s', 'C_s', 'kappa_s'], rows)
    return EXIT_OK


def cmd_verify(args) -> int:
    """Handle 'fracest verify' - run the self-check suite"""
    config = load_run_config(args, 'verify', ['seed', 'verify_trials', 'alpha1', 'alpha2'])
    report = run_verification(seed=config.seed, trials=config.verify_trials, inject_bug=args.inject_bug,
                              alpha1=config.alpha1, alpha2=config.alpha2)
    if args.format == 'json':
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(report.to_text())
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_solve(args) -> int:
    """Handle 'fracest solve' - sample the exact extension and its t-derivative"""
    config = load_run_config(args, 'solve', ['s', 'm', 'M', 'output', 'field_output', 'grid_nx',
                                             'grid_nt', 't_max', 'max_modes'])
    domain = DomainSpec(max_modes=config.max_modes)
    f = build_rhs(config.m, config.M, domain)
    w = exact_extension(f, domain, config.s)
    w_t = gradient_field(w).t
    xs = np.linspace(0.0, 1.0, config.grid_nx)
    ts = np.linspace(0.0, config.t_max, config.grid_nt)
    values = w.evaluate_grid(xs, ts)
    derivs = w_t.evaluate_grid(xs, ts)
    rows = ((xs[i], ts[j], values[i, j], derivs[i, j]) for j in range(len(ts)) for i in range(len(xs)))
    with open_output(config.output) as handle:
        write_plot_data(handle, ['x', 't', 'w', 'w_t'], rows)
    if config.field_output:
        with open_output(config.field_output) as handle:
            json.dump({'s': config.s, 'm': config.m, 'M': config.M, 'field': w.to_dict()}, handle, indent=2)
            handle.write("\n")
    return EXIT_OK


def cmd_experiment(args) -> int:
    """Handle 'fracest experiment' - one perturbation series"""
    config = load_run_config(args, 'experiment', EXPERIMENT_KEYS)
    summary, records = run_series(config.to_perturbation_spec(), workers=config.workers, name=config.name)
    with open_output(config.output or "fracest_trials.csv") as handle:
        write_trials_csv(handle, records)
    if config.summary_output:
        with open_output(config.summary_output) as handle:
            write_summary_csv(handle, [summary])
    if config.disturbance_output:
        columns = ['k', 'delta'] + [f"eps_{i}" for i in range(1, config.M + 1)]
        with open_output(config.disturbance_output) as handle:
            write_plot_data(handle, columns, ([r.k, r.delta] + list(r.eps) for r in records))
    if not args.quiet:
        print(summary.to_text())
    return EXIT_OK


def cmd_table(args) -> int:
    """Handle 'fracest table' - run several series presets and tabulate them"""
    names = args.presets.split(',') if args.presets else TABLE_PRESETS
    summaries = []
    references = []
    for name in names:
        overrides = preset_config(name.strip())
        if args.trials is not None:
            overrides['n_trials'] = args.trials
        if args.workers is not None:
            overrides['workers'] = args.workers
        config = RunConfig().merged(overrides)
        errors = config.validate('table')
        if errors:
            raise ConfigError(f"preset {name}: " + "; ".join(errors))
        summary, _ = run_series(config.to_perturbation_spec(), workers=config.workers, name=config.name)
        summaries.append(summary)
        references.append(preset_reference(name.strip()) or {})
    print(f"{'preset':<13} {'n':>4} {'m':>4} {'M':>3} {'N':>3} {'alpha':>5} "
          f"{'I1':>7} {'I2':>7} {'d_max':>7} {'e_max':>7}   {'ref I1':>7} {'ref I2':>7}")
    for s, ref in zip(summaries, references):
        print(f"{s.name:<13} {s.n:>4d} {s.m:>4g} {s.M:>3d} {s.N:>3d} {s.alpha:>5g} "
              f"{s.mean_I1:>7.3f} {s.mean_I2:>7.3f} {s.delta_max:>7.4f} {s.eps_max:>7.4f}   "
              f"{ref.get('I1', float('nan')):>7.3f} {ref.get('I2', float('nan')):>7.3f}")
    if args.output:
        with open_output(args.output) as handle:
            write_summary_csv(handle, summaries)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    """Handle 'fracest oracle-check' - analytic norms against quadrature"""
    try:
        orders = [float(v) for v in args.orders.split(',')]
    except ValueError as e:
        raise ConfigError(f"orders must be numbers: {e}") from e
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(args.seed)))
    result = check_quadrature_oracle(rng, args.fields, orders, args.tol)
    status = "PASS" if result.passed else "FAIL"
    print(f"{status}  {result.trials} comparisons, {result.failures} failures, "
          f"max relative difference {result.max_residual:.3e} (tol {args.tol:.0e})")
    return EXIT_OK if result.passed else EXIT_VERIFY


def cmd_presets(args) -> int:
    """Handle 'fracest presets' - list the available presets"""
    for name in list_presets():
        print(name)
    return EXIT_OK


EXPERIMENT_KEYS = ['m', 'M', 'N', 'alpha', 'n_trials', 'seed', 'delta0', 'eps0', 'growth', 'max_modes',
                   'mode_exponent', 'neighbours', 'workers', 'output', 'summary_output', 'disturbance_output', 'name']


def _add_config_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--config', help='YAML config file with flat key: value pairs')
    parser.add_argument('--preset', help='Named preset from templates/ (see "fracest presets")')
    parser.add_argument('--set', action='append', metavar='KEY=VALUE', help='Override any config key (repeatable)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='fracest',
        description='Functional a posteriori error bounds for the spectral fractional Laplacian'
    )
    parser.add_argument('--version', action='version', version=f'fracest {__version__}')
    parser.add_argument('-v', '--verbose', action='store_true', help='Debug logging on stderr')

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    # Constants command
    p = subparsers.add_parser('constants', help='Tabulate C_s and kappa_s over s')
    p.add_argument('--start', type=float, default=0.05, help='First order (default: 0.05)')
    p.add_argument('--stop', type=float, default=0.95, help='Last order (default: 0.95)')
    p.add_argument('--step', type=float, default=0.05, help='Grid step (default: 0.05)')
    p.add_argument('--grid', help='Explicit comma-separated orders (overrides start/stop/step)')
    p.add_argument('--output', help='Plot-data file (default: stdout)')
    p.set_defaults(func=cmd_constants)

    # Verify command
    p = subparsers.add_parser('verify', help='Run the seeded self-check suite')
    _add_config_options(p)
    p.add_argument('--seed', type=int, help='Root seed')
    p.add_argument('--trials', dest='verify_trials', type=int, help='Error identity trials (default: 200)')
    p.add_argument('--alpha1', type=float, help='Divergence weight of the two-sided check (default: 0.25)')
    p.add_argument('--alpha2', type=float, help='Trace weight of the two-sided check (default: 0.25)')
    p.add_argument('--inject-bug', action='store_true', help='Halve the majorant to test the harness')
    p.add_argument('--format', choices=['json', 'text'], default='text', help='Output format')
    p.set_defaults(func=cmd_verify)

    # Solve command
    p = subparsers.add_parser('solve', help='Sample the exact s = 1/2 extension on a grid')
    _add_config_options(p)
    p.add_argument('--s', type=float, help='Fractional order (only 0.5 has a closed form)')
    p.add_argument('--m', type=float, help='Decay exponent of f')
    p.add_argument('--M', type=int, help='Number of modes of f')
    p.add_argument('--nx', dest='grid_nx', type=int, help='Grid points in x (default: 41)')
    p.add_argument('--nt', dest='grid_nt', type=int, help='Grid points in t (default: 41)')
    p.add_argument('--t-max', dest='t_max', type=float, help='Largest t on the grid (default: 2)')
    p.add_argument('--max-modes', dest='max_modes', type=int, help='Series length cap')
    p.add_argument('--output', help='Plot-data file with columns x t w w_t (default: stdout)')
    p.add_argument('--field-output', dest='field_output', help='JSON dump of the separable field')
    p.set_defaults(func=cmd_solve)

    # Experiment command
    p = subparsers.add_parser('experiment', help='Run one perturbation series')
    _add_config_options(p)
    p.add_argument('--m', type=float, help='Decay exponent of f')
    p.add_argument('--M', type=int, help='Number of modes of f')
    p.add_argument('--N', type=int, help='Number of modes of the approximation')
    p.add_argument('--alpha', type=float, help='Parameter of the combined estimate')
    p.add_argument('--trials', dest='n_trials', type=int, help='Number of trials')
    p.add_argument('--seed', type=int, help='Series seed')
    p.add_argument('--delta0', type=float, help='Base eigenvalue disturbance')
    p.add_argument('--eps0', type=float, help='Base eigenfunction disturbance')
    p.add_argument('--growth', choices=['linear', 'constant'], help='Amplitude growth over trials')
    p.add_argument('--mode-exponent', dest='mode_exponent', type=float,
                   help='Disturbance of mode i scales with (i / M) to this power (default: 1.5)')
    p.add_argument('--neighbours', choices=['lower', 'adjacent'], help='Modes an eigenfunction mixes with')
    p.add_argument('--max-modes', dest='max_modes', type=int, help='Series length cap')
    p.add_argument('--workers', type=int, help='Worker processes (default: 1)')
    p.add_argument('--name', help='Series label in summaries')
    p.add_argument('--output', help='Per-trial CSV (default: fracest_trials.csv, "-" for stdout)')
    p.add_argument('--summary-output', dest='summary_output', help='Summary CSV')
    p.add_argument('--disturbance-output', dest='disturbance_output', help='Per-mode disturbances as plot data')
    p.add_argument('--quiet', action='store_true', help='Suppress the summary on stdout')
    p.set_defaults(func=cmd_experiment)

    # Table command
    p = subparsers.add_parser('table', help='Run series presets and print a summary table')
    p.add_argument('--presets', help=f'Comma-separated preset names (default: {TABLE_PRESETS[0]}..{TABLE_PRESETS[-1]})')
    p.add_argument('--trials', type=int, help='Override the number of trials of every series')
    p.add_argument('--workers', type=int, help='Worker processes per series')
    p.add_argument('--output', help='Summary CSV')
    p.set_defaults(func=cmd_table)

    # Oracle check command
    p = subparsers.add_parser('oracle-check', help='Compare analytic norms with quadrature')
    p.add_argument('--seed', type=int, default=7, help='Seed of the random fields')
    p.add_argument('--fields', type=int, default=50, help='Random fields per order (default: 50)')
    p.add_argument('--orders', default='0.3,0.5,0.7', help='Comma-separated orders')
    p.add_argument('--tol', type=float, default=1e-6, help='Relative tolerance')
    p.set_defaults(func=cmd_oracle_check)

    # Presets command
    p = subparsers.add_parser('presets', help='List available presets')
    p.set_defaults(func=cmd_presets)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point"""
    if argv is None:
        argv = sys.argv[1:]

    parser = build_parser()
    if not argv:
        parser.print_help()
        return EXIT_OK

    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )

    if not hasattr(args, 'func'):
        parser.print_help()
        return EXIT_OK

    try:
        return args.func(args)
    except KeyboardInterrupt:
        print("\nInterrupted", file=sys.stderr)
        return 130
    except ConfigError as e:
        print("Invalid configuration", file=sys.stderr)
        print(str(e), file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"Cannot write output: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except FracestError as e:
        print(f"Numerical domain error: {e}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == '__main__':
    sys.exit(main())
