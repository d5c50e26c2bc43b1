#!/usr/bin/env python3
"""Contract tests for fracest CLI commands."""

import json
import os
import shutil
import subprocess
import sys
import tempfile
import unittest
from pathlib import Path


class TestFracestCLI(unittest.TestCase):
    def setUp(self):
        self.test_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.test_dir)

    def run_command(self, *args):
        env = os.environ.copy()
        # Ensure src is on PYTHONPATH for module discovery when using system python
        src_path = str(Path(__file__).parent.parent.parent / 'src')
        env['PYTHONPATH'] = src_path + os.pathsep + env.get('PYTHONPATH', '')
        cmd = [sys.executable, '-m', 'fracest'] + list(args)
        return subprocess.run(cmd, capture_output=True, text=True, cwd=Path(__file__).parent.parent.parent, env=env)

    def path(self, name):
        return os.path.join(self.test_dir, name)

    def data_rows(self, text):
        return [line.split() for line in text.splitlines() if line and not line.startswith('#')]

    def test_no_arguments_prints_help(self):
        result = self.run_command()
        self.assertEqual(result.returncode, 0)
        self.assertIn('constants', result.stdout)
        self.assertIn('experiment', result.stdout)

    def test_version(self):
        result = self.run_command('--version')
        self.assertEqual(result.returncode, 0)
        self.assertIn('fracest', result.stdout)

    def test_constants_grid(self):
        result = self.run_command('constants', '--grid', '0.25,0.5,0.75')
        self.assertEqual(result.returncode, 0, f"stderr: {result.stderr}")
        self.assertTrue(result.stdout.startswith('# s C_s kappa_s'))
        rows = self.data_rows(result.stdout)
        self.assertEqual(len(rows), 3)
        s, c_s, kappa_s = map(float, rows[1])
        self.assertEqual(s, 0.5)
        self.assertAlmostEqual(c_s, 1.0, places=15)
        self.assertAlmostEqual(kappa_s, 1.0, places=15)

    def test_constants_default_range_to_file(self):
        out = self.path('constants.dat')
        result = self.run_command('constants', '--output', out)
        self.assertEqual(result.returncode, 0, f"stderr: {result.stderr}")
        with open(out) as f:
            rows = self.data_rows(f.read())
        self.assertEqual(len(rows), 19)

    def test_constants_out_of_range(self):
        result = self.run_command('constants', '--grid', '0.5,1.0')
        self.assertEqual(result.returncode, 1)
        self.assertIn('offending', result.stderr)

    def test_verify_passes(self):
        result = self.run_command('verify', '--trials', '8', '--seed', '3')
        self.assertEqual(result.returncode, 0, f"stdout: {result.stdout}\nstderr: {result.stderr}")
        self.assertIn('All checks passed', result.stdout)

    def test_verify_json(self):
        result = self.run_command('verify', '--trials', '4', '--format', 'json')
        self.assertEqual(result.returncode, 0)
        data = json.loads(result.stdout)
        self.assertTrue(data['passed'])
        self.assertEqual(len(data['checks']), 8)

    def test_verify_injected_bug(self):
        result = self.run_command('verify', '--trials', '8', '--inject-bug')
        self.assertEqual(result.returncode, 2)
        self.assertIn('FAIL', result.stdout)

    def test_verify_large_weights_skip_upper_side(self):
        result = self.run_command('verify', '--trials', '4', '--alpha1', '0.6', '--alpha2', '0.6',
                                  '--format', 'json')
        self.assertEqual(result.returncode, 0, f"stdout: {result.stdout}\nstderr: {result.stderr}")
        names = [c['name'] for c in json.loads(result.stdout)['checks']]
        self.assertIn('two-sided estimates', names)

    def test_verify_rejects_nonpositive_weight(self):
        result = self.run_command('verify', '--trials', '4', '--alpha1', '0')
        self.assertEqual(result.returncode, 1)
        self.assertIn('alpha1', result.stderr)

    def test_solve_plot_data_and_field(self):
        field_path = self.path('field.json')
        result = self.run_command('solve', '--M', '3', '--nx', '5', '--nt', '2', '--field-output', field_path)
        self.assertEqual(result.returncode, 0, f"stderr: {result.stderr}")
        self.assertTrue(result.stdout.startswith('# x t w w_t'))
        rows = self.data_rows(result.stdout)
        self.assertEqual(len(rows), 10)
        # boundary values vanish
        self.assertAlmostEqual(float(rows[0][2]), 0.0, places=14)
        with open(field_path) as f:
            data = json.load(f)
        self.assertEqual(data['M'], 3)
        self.assertEqual(len(data['field']['terms']), 3)

    def test_solve_rejects_other_orders(self):
        result = self.run_command('solve', '--s', '0.3')
        self.assertEqual(result.returncode, 3)
        self.assertIn('s = 1/2', result.stderr)

    def test_solve_invalid_order(self):
        result = self.run_command('solve', '--s', '1.5')
        self.assertEqual(result.returncode, 1)

    def test_experiment_csv(self):
        out = self.path('trials.csv')
        summary = self.path('summary.csv')
        result = self.run_command('experiment', '--preset', 'series-1', '--trials', '3',
                                  '--output', out, '--summary-output', summary)
        self.assertEqual(result.returncode, 0, f"stderr: {result.stderr}")
        self.assertIn('I1', result.stdout)
        with open(out) as f:
            lines = f.read().splitlines()
        self.assertEqual(lines[0], '# schema: fracest-trials/1')
        self.assertEqual(lines[1], 'k,delta,eps_max,energy_error,flux_error,majorant,minorant,I1,I2')
        self.assertEqual(len(lines), 5)
        with open(summary) as f:
            self.assertIn('series-1', f.read())

    def test_experiment_is_deterministic(self):
        args = ['experiment', '--M', '6', '--N', '5', '--trials', '3', '--seed', '17', '--output', '-', '--quiet']
        r1 = self.run_command(*args)
        r2 = self.run_command(*args)
        self.assertEqual(r1.returncode, 0, f"stderr: {r1.stderr}")
        self.assertEqual(r1.stdout, r2.stdout)

    def test_experiment_disturbance_shape(self):
        args = ['experiment', '--M', '6', '--N', '6', '--trials', '2', '--seed', '17', '--output', '-', '--quiet']
        default = self.run_command(*args)
        uniform = self.run_command(*args, '--neighbours', 'adjacent', '--mode-exponent', '0')
        self.assertEqual(default.returncode, 0, f"stderr: {default.stderr}")
        self.assertEqual(uniform.returncode, 0, f"stderr: {uniform.stderr}")
        self.assertNotEqual(default.stdout, uniform.stdout)
        result = self.run_command(*args, '--neighbours', 'upper')
        self.assertEqual(result.returncode, 2)

    def test_experiment_disturbance_output(self):
        out = self.path('eps.dat')
        result = self.run_command('experiment', '--M', '4', '--N', '4', '--trials', '2', '--quiet',
                                  '--output', self.path('t.csv'), '--disturbance-output', out)
        self.assertEqual(result.returncode, 0, f"stderr: {result.stderr}")
        with open(out) as f:
            text = f.read()
        self.assertTrue(text.startswith('# k delta eps_1 eps_2 eps_3 eps_4'))
        self.assertEqual(len(self.data_rows(text)), 2)

    def test_experiment_config_file_and_set(self):
        config = self.path('run.yaml')
        with open(config, 'w') as f:
            f.write("M: 6\nN: 6\nn_trials: 2\n")
        out = self.path('t.csv')
        result = self.run_command('experiment', '--config', config, '--set', 'N=4', '--output', out)
        self.assertEqual(result.returncode, 0, f"stderr: {result.stderr}")
        self.assertRegex(result.stdout, r'\n\s+2\s+1\s+6\s+4\s')

    def test_experiment_invalid_configuration(self):
        result = self.run_command('experiment', '--M', '12', '--N', '13')
        self.assertEqual(result.returncode, 1)
        self.assertIn('Invalid configuration', result.stderr)
        result = self.run_command('experiment', '--set', 'colour=red')
        self.assertEqual(result.returncode, 1)
        self.assertIn('colour', result.stderr)

    def test_experiment_rejects_other_orders(self):
        result = self.run_command('experiment', '--M', '4', '--N', '4', '--trials', '1', '--set', 's=0.3',
                                  '--output', self.path('t.csv'))
        self.assertEqual(result.returncode, 1)
        self.assertIn('s:', result.stderr)
        self.assertFalse(os.path.exists(self.path('t.csv')))

    def test_experiment_missing_config(self):
        result = self.run_command('experiment', '--config', self.path('missing.yaml'))
        self.assertEqual(result.returncode, 1)
        self.assertIn('not found', result.stderr)

    def test_experiment_unwritable_output(self):
        result = self.run_command('experiment', '--M', '4', '--N', '4', '--trials', '1',
                                  '--output', self.path('no/such/dir/t.csv'))
        self.assertEqual(result.returncode, 1)

    def test_table(self):
        out = self.path('table.csv')
        result = self.run_command('table', '--presets', 'series-1,series-7', '--trials', '2', '--output', out)
        self.assertEqual(result.returncode, 0, f"stderr: {result.stderr}")
        self.assertIn('series-7', result.stdout)
        self.assertIn('4.782', result.stdout)
        with open(out) as f:
            self.assertEqual(len(f.read().splitlines()), 4)

    def test_presets(self):
        result = self.run_command('presets')
        self.assertEqual(result.returncode, 0)
        for i in range(1, 9):
            self.assertIn(f'series-{i}', result.stdout)

    def test_oracle_check(self):
        result = self.run_command('oracle-check', '--fields', '2', '--orders', '0.5')
        self.assertEqual(result.returncode, 0, f"stdout: {result.stdout}\nstderr: {result.stderr}")
        self.assertTrue(result.stdout.startswith('PASS'))


if __name__ == '__main__':
    unittest.main()
