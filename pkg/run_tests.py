#!/usr/bin/env python3
"""
Test runner for fracest.

Each suite runs in its own interpreter with src/ on PYTHONPATH, phase by
phase: contract, integration, performance, unit. ``--quick`` keeps only the
suites marked quick and never runs the performance phase.
"""

import argparse
import os
import subprocess
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

ROOT = Path(__file__).parent.resolve()
PHASES = ('contract', 'integration', 'performance', 'unit')


@dataclass(frozen=True)
class Suite:
    phase: str
    target: str
    label: str
    timeout: int = 120
    quick: bool = False

    def command(self) -> List[str]:
        if self.target.endswith('.py'):
            return [sys.executable, self.target]
        return [sys.executable, '-m', 'unittest', '-v', self.target]


SUITES = [
    Suite('contract', 'tests.contract.test_fracest_cli', 'fracest CLI contract'),
    Suite('integration', 'tests.integration.test_library_boundaries', 'library boundaries', quick=True),
    Suite('integration', 'tests/integration/test_unified_cli.py', 'CLI workflows', quick=True),
    Suite('performance', 'tests.performance.test_performance', 'speed requirements', timeout=300),
    Suite('unit', 'tests.unit.test_constants', 'extension constants'),
    Suite('unit', 'tests.unit.test_series', 'series algebra'),
    Suite('unit', 'tests.unit.test_fields', 'separable fields', quick=True),
    Suite('unit', 'tests.unit.test_estimators', 'error estimators', quick=True),
    Suite('unit', 'tests.unit.test_quadrature', 'quadrature oracle'),
    Suite('unit', 'tests.unit.test_experiments', 'perturbation campaigns'),
    Suite('unit', 'tests.unit.test_verification', 'verification harness'),
    Suite('unit', 'tests.unit.test_config', 'configuration and output'),
    Suite('unit', 'tests.unit.test_runner', 'suite table'),
]


def select(quick: bool, phases: Optional[Sequence[str]]) -> List[Suite]:
    chosen = [s for s in SUITES if not phases or s.phase in phases]
    if quick:
        chosen = [s for s in chosen if s.quick]
    return chosen


def run_suite(suite: Suite, echo: bool) -> bool:
    env = os.environ.copy()
    env['PYTHONPATH'] = str(ROOT / 'src')
    start = time.time()
    try:
        result = subprocess.run(suite.command(), capture_output=True, text=True, timeout=suite.timeout,
                                env=env, cwd=ROOT)
    except subprocess.TimeoutExpired:
        print(f"  TIMEOUT  {suite.label} after {suite.timeout}s")
        return False
    except OSError as e:
        print(f"  ERROR    {suite.label}: {e}")
        return False
    ok = result.returncode == 0
    print(f"  {'ok' if ok else 'FAIL':<8} {suite.label} ({time.time() - start:.1f}s)")
    if echo or not ok:
        sys.stdout.write(result.stdout)
        sys.stdout.write(result.stderr)
    return ok


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(description='Run the fracest test suites')
    parser.add_argument('--quick', action='store_true', help='Only the fast development suites')
    parser.add_argument('--phase', action='append', choices=PHASES, help='Restrict to a phase (repeatable)')
    parser.add_argument('--echo', action='store_true', help='Print suite output even when it passes')
    args = parser.parse_args(argv)

    suites = select(args.quick, args.phase)
    failed = []
    start = time.time()
    for phase in PHASES:
        batch = [s for s in suites if s.phase == phase]
        if not batch:
            continue
        print(f"[{phase}]")
        failed.extend(s.label for s in batch if not run_suite(s, args.echo))

    print(f"\n{len(suites) - len(failed)}/{len(suites)} suites passed in {time.time() - start:.1f}s")
    for label in failed:
        print(f"  failed: {label}")
    return 1 if failed else 0


if __name__ == '__main__':
    sys.exit(main())
