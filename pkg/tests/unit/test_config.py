#!/usr/bin/env python3
"""
Unit tests for run configuration, presets and output writers.
"""

import io
import os
import sys
import tempfile
import unittest

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..', 'src'))

from fracest.config import ConfigError, RunConfig, parse_assignments, resolve_config
from fracest.output import (
    SUMMARY_COLUMNS, TRIAL_COLUMNS, format_number, read_csv_rows, trials_csv_text, write_plot_data,
    write_summary_csv,
)
from fracest.presets import TABLE_PRESETS, list_presets, load_preset, preset_config, preset_reference
from fracest_stats.models import SeriesSummary, TrialRecord


class TestRunConfig(unittest.TestCase):
    """Layered configuration"""

    def setUp(self):
        self.test_dir = tempfile.mkdtemp()

    def write(self, name, text):
        path = os.path.join(self.test_dir, name)
        with open(path, 'w') as f:
            f.write(text)
        return path

    def test_defaults_valid(self):
        config = RunConfig()
        for command in ('experiment', 'solve', 'verify', 'table'):
            self.assertEqual(config.validate(command), [], command)

    def test_unknown_keys_rejected(self):
        with self.assertRaises(ConfigError):
            RunConfig.from_dict({'bogus': 1})
        with self.assertRaises(ConfigError):
            RunConfig().merged({'trials': 5})

    def test_yaml_round_trip(self):
        config = RunConfig(M=8, N=6, name='x')
        self.assertEqual(RunConfig.from_yaml(config.to_yaml()), config)

    def test_malformed_yaml(self):
        with self.assertRaises(ConfigError):
            RunConfig.from_yaml("M: [1, 2")
        with self.assertRaises(ConfigError):
            RunConfig.from_yaml("- 1\n- 2\n")

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            RunConfig.from_yaml_file(os.path.join(self.test_dir, 'missing.yaml'))

    def test_priority_order(self):
        path = self.write('run.yaml', "M: 10\nN: 9\nseed: 5\n")
        config = resolve_config({'M': 20, 'N': 20, 'alpha': 0.3}, path, {'N': 7, 'seed': None}, ['seed=9'])
        self.assertEqual(config.M, 10)
        self.assertEqual(config.N, 7)
        self.assertEqual(config.seed, 9)
        self.assertEqual(config.alpha, 0.3)

    def test_file_with_unknown_key(self):
        path = self.write('bad.yaml', "M: 10\ncolour: red\n")
        with self.assertRaises(ConfigError):
            resolve_config(config_file=path)

    def test_parse_assignments(self):
        parsed = parse_assignments(['M=8', 'alpha=0.25', 'name=row one', 'output='])
        self.assertEqual(parsed, {'M': 8, 'alpha': 0.25, 'name': 'row one', 'output': None})
        with self.assertRaises(ConfigError):
            parse_assignments(['M'])
        with self.assertRaises(ConfigError):
            parse_assignments(['=3'])

    def test_validation_messages(self):
        errors = RunConfig(N=20, M=12, s=1.2, workers=0).validate('experiment')
        joined = "\n".join(errors)
        for key in ('s:', 'workers:', 'N:'):
            self.assertIn(key, joined)
        self.assertTrue(RunConfig(M=100).validate('solve'))
        self.assertTrue(RunConfig(t_max=-1.0).validate('solve'))

    def test_series_need_half_order(self):
        for command in ('experiment', 'table'):
            errors = RunConfig(s=0.3).validate(command)
            self.assertEqual(len(errors), 1, command)
            self.assertTrue(errors[0].startswith('s:'))
        self.assertEqual(RunConfig(s=0.3).validate('verify'), [])

    def test_verify_weights(self):
        self.assertEqual(RunConfig(alpha1=0.7, alpha2=0.6).validate('verify'), [])
        joined = "\n".join(RunConfig(alpha1=0.0, alpha2='x').validate('verify'))
        self.assertIn('alpha1:', joined)
        self.assertIn('alpha2:', joined)

    def test_perturbation_spec(self):
        spec = RunConfig(M=8, N=4, seed=3, growth='constant').to_perturbation_spec()
        self.assertEqual((spec.M, spec.N, spec.seed, spec.growth), (8, 4, 3, 'constant'))
        self.assertEqual((spec.mode_exponent, spec.neighbours), (1.5, 'lower'))
        spec = RunConfig(mode_exponent=0.0, neighbours='adjacent').to_perturbation_spec()
        self.assertEqual((spec.mode_exponent, spec.neighbours), (0.0, 'adjacent'))

    def test_disturbance_shape_keys(self):
        joined = "\n".join(RunConfig(neighbours='upper', mode_exponent=-2).validate('experiment'))
        self.assertIn('neighbours:', joined)
        self.assertIn('mode_exponent:', joined)
        self.assertIn('M:', "\n".join(RunConfig(M=63, neighbours='adjacent').validate('experiment')))
        self.assertEqual(RunConfig(M=63, N=12).validate('experiment'), [])


class TestPresets(unittest.TestCase):
    """Named presets under templates/"""

    def test_all_table_presets_load(self):
        names = list_presets()
        for name in TABLE_PRESETS:
            self.assertIn(name, names)
            config = RunConfig().merged(preset_config(name))
            self.assertEqual(config.validate('experiment'), [], name)
            self.assertEqual(config.name, name)
            reference = preset_reference(name)
            self.assertGreater(reference['I1'], 1.0)
            self.assertGreater(reference['I2'], 1.0)

    def test_verify_preset(self):
        self.assertEqual(preset_config('verify-default')['verify_trials'], 200)

    def test_missing_preset(self):
        with self.assertRaises(ConfigError):
            load_preset('no-such-preset')


class TestOutput(unittest.TestCase):
    """CSV and plot-data writers"""

    def setUp(self):
        self.record = TrialRecord(k=1, delta=0.001, eps=[0.01, 0.02], energy_error=0.1, flux_error=0.2,
                                  majorant=0.3, minorant=0.05, a8_lhs=0.04, a8_rhs=0.5, I1=3.0, I2=1.5)

    def test_format_number(self):
        self.assertEqual(format_number(3), '3')
        self.assertEqual(format_number(True), '1')
        self.assertEqual(format_number(0.1), '0.10000000000000001')
        self.assertEqual(format_number(float('nan')), 'nan')
        self.assertEqual(format_number(float('-inf')), '-inf')
        self.assertEqual(float(format_number(1 / 3)), 1 / 3)

    def test_trials_csv(self):
        text = trials_csv_text([self.record])
        lines = text.split('\n')
        self.assertEqual(lines[0], '# schema: fracest-trials/1')
        self.assertEqual(lines[1].split(','), TRIAL_COLUMNS)
        rows = read_csv_rows(io.StringIO(text))
        self.assertEqual(len(rows), 1)
        self.assertEqual(float(rows[0]['eps_max']), 0.02)
        self.assertEqual(float(rows[0]['I1']), 3.0)
        self.assertNotIn('\r', text)

    def test_summary_csv(self):
        summary = SeriesSummary(n=80, m=1.0, M=12, N=12, alpha=0.5, mean_I1=2.0, mean_I2=1.5,
                                delta_max=0.003, eps_max=0.015, name='series-1')
        buffer = io.StringIO()
        write_summary_csv(buffer, [summary])
        rows = read_csv_rows(io.StringIO(buffer.getvalue()))
        self.assertEqual(list(rows[0]), SUMMARY_COLUMNS)
        self.assertEqual(rows[0]['name'], 'series-1')
        self.assertEqual(rows[0]['n'], '80')

    def test_plot_data(self):
        buffer = io.StringIO()
        write_plot_data(buffer, ['s', 'C_s'], [(0.5, 1.0)])
        self.assertEqual(buffer.getvalue(), "# s C_s\n0.5 1\n")


if __name__ == '__main__':
    unittest.main()
