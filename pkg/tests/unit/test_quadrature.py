#!/usr/bin/env python3
"""
Unit tests for the brute-force quadrature oracle.
"""

import unittest
import sys
import os

import numpy as np

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..', 'src'))

from fracest_core.errors import DomainError
from fracest_core.fields import SeparableField, SeparableFlux, Term, gradient_field, weighted_norm
from fracest_core.quadrature import QuadratureSpec, quad_weighted_norm
from fracest_core.series import SinSeries


class TestQuadratureOracle(unittest.TestCase):
    """Quadrature against the closed-form Gram evaluation"""

    def setUp(self):
        self.field = SeparableField([
            Term(SinSeries([1.0, -0.5, 0.25]), 0, 1.3),
            Term(SinSeries([0.0, 0.8]), 2, 4.5),
        ])

    def test_scalar_field(self):
        for a in (-0.4, 0.0, 0.4):
            value, error = quad_weighted_norm(self.field, a)
            expected = weighted_norm(self.field, a)
            self.assertLess(abs(value - expected) / expected, 1e-8, f"a={a}")
            self.assertLess(error, 1e-7)

    def test_gradient_flux(self):
        grad = gradient_field(self.field)
        for a in (-0.4, 0.4):
            value, _ = quad_weighted_norm(grad, a)
            expected = weighted_norm(grad, a)
            self.assertLess(abs(value - expected) / expected, 1e-8, f"a={a}")

    def test_fixed_truncation(self):
        value, error = quad_weighted_norm(self.field, 0.0, QuadratureSpec(T=60.0, n_t=64))
        self.assertLess(abs(value - weighted_norm(self.field)) / value, 1e-8)
        self.assertLess(error, 1e-7)

    def test_error_estimate_flags_coarse_rule(self):
        _, coarse_error = quad_weighted_norm(self.field, -0.4, QuadratureSpec(n_t=1, nodes=2, graded_levels=1))
        _, fine_error = quad_weighted_norm(self.field, -0.4)
        self.assertGreater(coarse_error, fine_error)

    def test_zero_field(self):
        self.assertEqual(quad_weighted_norm(SeparableField.zero(), 0.0), (0.0, 0.0))
        self.assertEqual(quad_weighted_norm(SeparableFlux.zero(), 0.2), (0.0, 0.0))

    def test_nonintegrable_weight(self):
        with self.assertRaises(DomainError):
            quad_weighted_norm(self.field, -1.0)

    def test_spec_validation(self):
        with self.assertRaises(DomainError):
            QuadratureSpec(T=0.0)
        with self.assertRaises(DomainError):
            QuadratureSpec(nodes=0)
        with self.assertRaises(DomainError):
            QuadratureSpec(grading_ratio=1.0)
        self.assertEqual(QuadratureSpec().refined().nodes, 14)


if __name__ == '__main__':
    unittest.main()
