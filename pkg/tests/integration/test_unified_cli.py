#!/usr/bin/env python3
"""
Integration tests for the fracest CLI workflows
"""

import csv
import json
import math
import os
import subprocess
import sys
import tempfile
from pathlib import Path


def run_fracest(args, timeout=180, cwd=None):
    """Run fracest command and return result"""
    cmd = [sys.executable, '-m', 'fracest'] + args
    env = os.environ.copy()
    # Use absolute path for PYTHONPATH - go up two levels from tests/integration/
    current_dir = Path(__file__).parent.parent.parent.resolve()
    env['PYTHONPATH'] = str(current_dir / 'src')

    result = subprocess.run(
        cmd,
        capture_output=True,
        text=True,
        timeout=timeout,
        env=env,
        cwd=cwd or current_dir,
    )
    return result


def read_rows(path):
    with open(path) as f:
        return list(csv.DictReader(line for line in f if not line.startswith('#')))


def test_version():
    """Test --version command"""
    result = run_fracest(['--version'])
    assert result.returncode == 0
    assert 'fracest 1.0.0' in result.stdout
    print("✓ Version command works")


def test_help():
    """Test --help command"""
    result = run_fracest(['--help'])
    assert result.returncode == 0
    for command in ('constants', 'verify', 'solve', 'experiment', 'table', 'oracle-check'):
        assert command in result.stdout, command
    print("✓ Help command works")


def test_series_workflow():
    """Experiment CSV agrees with the printed summary and the per-trial bounds"""
    with tempfile.TemporaryDirectory() as tmpdir:
        trials = os.path.join(tmpdir, 'trials.csv')
        summary = os.path.join(tmpdir, 'summary.csv')
        result = run_fracest(['experiment', '--preset', 'series-2', '--trials', '6',
                              '--output', trials, '--summary-output', summary])
        assert result.returncode == 0, f"Command failed: {result.stderr}"

        rows = read_rows(trials)
        assert [int(r['k']) for r in rows] == list(range(1, 7))
        for r in rows:
            assert float(r['I1']) >= 1.0 - 1e-10, r
            assert float(r['I2']) >= 1.0 - 1e-10, r
            assert float(r['minorant']) <= float(r['energy_error']) * (1 + 1e-10), r

        total = read_rows(summary)[0]
        mean_i1 = math.fsum(float(r['I1']) for r in rows) / len(rows)
        assert abs(float(total['I1']) - mean_i1) <= 1e-12 * mean_i1
        assert float(total['eps_max']) == max(float(r['eps_max']) for r in rows)
        print("✓ Series workflow works")


def test_workers_do_not_change_output():
    """Parallel and sequential runs write identical CSV files"""
    with tempfile.TemporaryDirectory() as tmpdir:
        outputs = []
        for workers in ('1', '2'):
            path = os.path.join(tmpdir, f'trials_{workers}.csv')
            result = run_fracest(['experiment', '--M', '6', '--N', '6', '--trials', '4', '--seed', '8',
                                  '--workers', workers, '--output', path, '--quiet'])
            assert result.returncode == 0, f"Command failed: {result.stderr}"
            with open(path, 'rb') as f:
                outputs.append(f.read())
        assert outputs[0] == outputs[1]
        print("✓ Worker count does not change output")


def test_default_output_location():
    """Without --output the trials land in fracest_trials.csv in the working directory"""
    with tempfile.TemporaryDirectory() as tmpdir:
        result = run_fracest(['experiment', '--M', '4', '--N', '4', '--trials', '1', '--quiet'], cwd=tmpdir)
        assert result.returncode == 0, f"Command failed: {result.stderr}"
        assert (Path(tmpdir) / 'fracest_trials.csv').exists()
        print("✓ Default output location works")


def test_solve_field_round_trip():
    """The field JSON written by solve reloads into the same extension"""
    sys.path.insert(0, str(Path(__file__).parent.parent.parent / 'src'))
    from fracest_core.constants import DomainSpec
    from fracest_core.fields import SeparableField, exact_extension
    from fracest_core.series import build_rhs

    with tempfile.TemporaryDirectory() as tmpdir:
        path = os.path.join(tmpdir, 'field.json')
        result = run_fracest(['solve', '--M', '5', '--m', '2', '--nx', '3', '--nt', '3', '--field-output', path])
        assert result.returncode == 0, f"Command failed: {result.stderr}"
        with open(path) as f:
            data = json.load(f)
        field = SeparableField.from_dict(data['field'])
        domain = DomainSpec()
        assert field == exact_extension(build_rhs(2.0, 5, domain), domain)
        print("✓ Solve field round trip works")


def main():
    """Run all tests"""
    print("Testing fracest CLI workflows...")

    try:
        test_version()
        test_help()
        test_series_workflow()
        test_workers_do_not_change_output()
        test_default_output_location()
        test_solve_field_round_trip()

        print("\n🎉 All tests passed! CLI workflows are working correctly.")

    except Exception as e:
        print(f"\n❌ Test failed: {e}")
        return 1

    return 0


if __name__ == '__main__':
    exit(main())
