#!/usr/bin/env python3
"""
Integration tests for library boundaries and inter-library contracts.
Tests that fracest_core, fracest_stats and the fracest CLI layer exchange
data correctly and keep their dependency direction.
"""

import ast
import io
import json
import os
import sys
import tempfile
import unittest
from pathlib import Path

import numpy as np

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..', 'src'))

from fracest.cli import main
from fracest.config import RunConfig, resolve_config
from fracest.output import read_csv_rows, trials_csv_text, write_summary_csv
from fracest.presets import preset_config
from fracest_core.constants import DomainSpec
from fracest_core.estimators import majorant
from fracest_core.fields import (
    SeparableField, SeparableFlux, StreamMode, approx_extension, candidate_flux, exact_extension, stream_flux,
)
from fracest_core.series import build_rhs, eigenfunctions
from fracest_stats.experiments import (
    perturb_eigenfunctions, perturb_eigenvalues, run_series, run_trial, trial_rng,
)
from fracest_stats.models import PerturbationSpec, TrialRecord

SRC = Path(__file__).parent.parent.parent / 'src'


def imported_packages(package):
    names = set()
    for path in (SRC / package).glob('*.py'):
        tree = ast.parse(path.read_text(encoding='utf-8'))
        for node in ast.walk(tree):
            if isinstance(node, ast.Import):
                names.update(alias.name.split('.')[0] for alias in node.names)
            elif isinstance(node, ast.ImportFrom) and node.module and node.level == 0:
                names.add(node.module.split('.')[0])
    return names


class TestLibraryBoundaries(unittest.TestCase):
    """Test integration between the three packages"""

    def setUp(self):
        self.test_dir = tempfile.mkdtemp()

    def tearDown(self):
        import shutil
        shutil.rmtree(self.test_dir)

    def test_dependency_direction(self):
        self.assertFalse({'fracest', 'fracest_stats'} & imported_packages('fracest_core'))
        self.assertNotIn('fracest', imported_packages('fracest_stats'))

    def test_trial_matches_core_computation(self):
        """A trial record reproduces what the core estimators give on the same disturbed data"""
        spec = PerturbationSpec(M=6, N=5, n_trials=3, seed=77)
        record = run_trial(spec, 2)

        domain = DomainSpec()
        rng = trial_rng(77, 2)
        f = build_rhs(1.0, 6, domain)
        theta = perturb_eigenvalues(domain.eigenvalues(6), spec.amplitude(spec.delta0, 2), rng, spec.mode_exponent)
        psi = perturb_eigenfunctions(eigenfunctions(6, domain), spec.amplitude(spec.eps0, 2), rng, domain,
                                     spec.mode_exponent, spec.neighbours)
        w_tilde = approx_extension(theta, psi, f, 5)
        report = majorant(w_tilde, candidate_flux(theta, psi, f, 5), f, 0.5, domain,
                          w_exact=exact_extension(f, domain))
        self.assertAlmostEqual(record.energy_error / report.energy_error, 1.0, places=12)
        self.assertAlmostEqual(record.majorant / report.majorant, 1.0, places=10)
        self.assertAlmostEqual(record.flux_error / report.flux_error, 1.0, places=12)

    def test_records_survive_csv(self):
        spec = PerturbationSpec(M=5, N=5, n_trials=3, seed=5)
        _, records = run_series(spec)
        rows = read_csv_rows(io.StringIO(trials_csv_text(records)))
        for record, row in zip(records, rows):
            self.assertEqual(int(row['k']), record.k)
            self.assertEqual(float(row['majorant']), record.majorant)
            self.assertEqual(float(row['I2']), record.I2)

    def test_records_survive_json(self):
        record = run_trial(PerturbationSpec(M=4, N=3, n_trials=1), 1)
        restored = TrialRecord.from_dict(json.loads(json.dumps(record.to_dict())))
        self.assertEqual(restored, record)

    def test_fields_survive_json(self):
        domain = DomainSpec()
        w = exact_extension(build_rhs(1.0, 4, domain), domain)
        flux = stream_flux([StreamMode(1, 2.0, 0.5), StreamMode(0, 3.0, -0.2)])
        self.assertEqual(SeparableField.from_dict(json.loads(json.dumps(w.to_dict()))), w)
        self.assertEqual(SeparableFlux.from_dict(json.loads(json.dumps(flux.to_dict()))), flux)

    def test_preset_to_series(self):
        config = RunConfig().merged(preset_config('series-8')).merged({'n_trials': 2})
        summary, records = run_series(config.to_perturbation_spec(), name=config.name)
        self.assertEqual(summary.name, 'series-8')
        self.assertEqual((summary.M, summary.N, summary.alpha), (config.M, config.N, config.alpha))
        buffer = io.StringIO()
        write_summary_csv(buffer, [summary])
        self.assertIn('series-8', buffer.getvalue())

    def test_config_file_drives_cli(self):
        config_path = os.path.join(self.test_dir, 'run.yaml')
        out = os.path.join(self.test_dir, 'trials.csv')
        with open(config_path, 'w') as f:
            f.write(RunConfig(M=4, N=4, n_trials=2, output=out).to_yaml())
        self.assertEqual(resolve_config(config_file=config_path).output, out)
        self.assertEqual(main(['experiment', '--config', config_path, '--quiet']), 0)
        with open(out) as f:
            self.assertEqual(len(read_csv_rows(f)), 2)

    def test_cli_exit_codes_in_process(self):
        self.assertEqual(main(['constants', '--grid', '0.0']), 1)
        self.assertEqual(main(['solve', '--s', '0.7', '--output', os.path.join(self.test_dir, 'w.dat')]), 3)
        self.assertEqual(main([]), 0)


if __name__ == '__main__':
    unittest.main()
