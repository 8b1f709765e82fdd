#!/usr/bin/env python3
"""
Contains tests for the layer-adapted quadrature and the error norms
"""
import math
import unittest

import numpy as np

from api.v1.services.fem_service import galerkin_solve, sbl_mesh
from api.v1.services.norms_service import (balanced_norm, energy_norm,
                                           error_norms, evaluation_noise,
                                           exp_layer_errors)
from api.v1.services.quadrature_service import (integrate,
                                                layer_adapted_quadrature)
from api.v1.services.reference_service import reference_solution
from models.errors import DomainError
from models.problem import BvpProblem, Term


class _Constant:
    """x -> c with derivative 0."""

    def __init__(self, c):
        self.c = c

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        return np.full_like(x, self.c), np.zeros_like(x)


class _Layer:
    """x -> exp(-x/eps) on (0, 1)."""

    def __init__(self, eps):
        self.eps = eps

    def evaluate(self, x):
        value = np.exp(-np.asarray(x, dtype=float) / self.eps)
        return value, -value / self.eps


class _Ramp:
    """x -> c max(x - x0, 0), a kink at x0."""

    def __init__(self, x0, c):
        self.x0, self.c = x0, c

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        return (self.c * np.maximum(x - self.x0, 0.0),
                self.c * (x > self.x0).astype(float))


class TestQuadrature(unittest.TestCase):
    """
    Unit tests for layer_adapted_quadrature.
    """

    def test_resolves_thin_layers(self):
        """
        Test the integral of exp(-(1+x)/eps) for small eps.
        """
        for eps in (1e-2, 1e-4, 1e-8):
            with self.subTest(epsilon=eps):
                rule = layer_adapted_quadrature(eps)
                value = integrate(lambda x: np.exp(-(1.0 + x) / eps), rule)
                exact = eps * -math.expm1(-2.0 / eps)
                self.assertAlmostEqual(value / exact, 1.0, places=10)

    def test_breakpoints_and_refinement(self):
        """
        Test extra panel edges and subdivision.
        """
        rule = layer_adapted_quadrature(0.1, breakpoints=[-0.37, 0.5, 2.0])
        self.assertIn(-0.37, rule.edges)
        self.assertNotIn(2.0, rule.edges)
        self.assertEqual(rule.edges[0], -1.0)
        self.assertEqual(rule.edges[-1], 1.0)
        fine = layer_adapted_quadrature(0.1, breakpoints=[-0.37, 0.5],
                                        refine=2)
        self.assertEqual(fine.panels, 2 * rule.panels)
        self.assertAlmostEqual(float(fine.weights.sum()), 2.0)

    def test_invalid_epsilon(self):
        """
        Test the eps range.
        """
        with self.assertRaises(DomainError):
            layer_adapted_quadrature(0.0)


class TestErrorNorms(unittest.TestCase):
    """
    Unit tests for error_norms and exp_layer_errors.
    """

    def test_norm_formulas(self):
        """
        Test the balanced and energy norms.
        """
        self.assertAlmostEqual(balanced_norm(0.25, 3.0, 2.0), math.sqrt(10))
        self.assertAlmostEqual(energy_norm(0.5, 1.0, 2.0), math.sqrt(2.0))

    def test_zero_error(self):
        """
        Test that the reference has zero error against itself.
        """
        problem = BvpProblem(1e-3)
        u = reference_solution(problem)
        errors = error_norms(u, u, problem)
        for key in ("l2", "h1_semi", "linf", "energy", "balanced", "w1inf"):
            self.assertEqual(errors[key], 0.0)
        self.assertFalse(errors["flagged"])

    def test_constant_error(self):
        """
        Test all norms of a constant difference.
        """
        problem = BvpProblem(0.01, b=Term.constant(3.0))
        errors = error_norms(_Constant(1.0), _Constant(0.0), problem)
        self.assertAlmostEqual(errors["l2"], math.sqrt(2.0))
        self.assertEqual(errors["h1_semi"], 0.0)
        self.assertEqual(errors["linf"], 1.0)
        self.assertAlmostEqual(errors["energy"], math.sqrt(6.0))
        self.assertAlmostEqual(errors["balanced"], math.sqrt(2.0))

    def test_layer_error(self):
        """
        Test the norms of the solution itself at small eps.
        """
        eps = 1e-4
        problem = BvpProblem(eps)
        u = reference_solution(problem)
        errors = error_norms(_Constant(0.0), u, problem)
        self.assertFalse(errors["flagged"])
        self.assertAlmostEqual(errors["linf"], 1.0, places=6)
        # |u|_1^2 is about 1/eps from the two layers
        self.assertAlmostEqual(errors["h1_semi"] ** 2 * eps, 1.0, places=3)

    def test_exp_layer_errors(self):
        """
        Test the (0, 1) layer norms against zero and the exact layer.
        """
        eps = 1e-3
        exact = exp_layer_errors(_Layer(eps), eps)
        self.assertEqual(exact["l2"], 0.0)
        self.assertEqual(exact["weighted_h1"], 0.0)
        zero = exp_layer_errors(_Constant(0.0), eps)
        self.assertAlmostEqual(zero["l2"] ** 2, eps / 2, places=10)
        self.assertAlmostEqual(zero["h1_semi"] ** 2, 1 / (2 * eps), places=6)
        self.assertAlmostEqual(zero["weighted_h1"], math.sqrt(0.5),
                               places=8)
        self.assertEqual(zero["linf"], 1.0)
        self.assertFalse(zero["flagged"])

    def test_kinks_off_panel_edges(self):
        """
        Test that an unresolved kink is flagged unless it is a panel edge
        or covered by the deviation from a kink-free surrogate.
        """
        problem = BvpProblem(0.1)
        ramp, zero = _Ramp(0.1234567, 1e-6), _Constant(0.0)
        self.assertTrue(error_norms(ramp, zero, problem)["flagged"])
        edged = error_norms(ramp, zero, problem, breakpoints=[0.1234567])
        self.assertFalse(edged["flagged"])
        covered = error_norms(ramp, zero, problem, surrogate=zero)
        self.assertFalse(covered["flagged"])
        self.assertEqual(covered["l2"], error_norms(ramp, zero, problem,
                                                    check=False)["l2"])

    def test_evaluation_noise(self):
        """
        Test the noise level: ulps of 1 stretched by 1/eps.
        """
        self.assertAlmostEqual(evaluation_noise(1.0) / evaluation_noise(0.5),
                               0.5)
        self.assertAlmostEqual(
            evaluation_noise(1e-8) / evaluation_noise(1.0), 1e8, delta=1e-4)
        self.assertLess(evaluation_noise(1.0), 1e-12)

    def test_galerkin_at_tiny_eps(self):
        """
        Test that Galerkin solutions at eps = 1e-8 pass the check.
        """
        problem = BvpProblem(1e-8)
        u = reference_solution(problem)
        for p in (2, 4, 8):
            with self.subTest(p=p):
                mesh = sbl_mesh(1.0, p, 1e-8)
                errors = error_norms(galerkin_solve(problem, mesh, p), u,
                                     problem, mesh.nodes)
                self.assertFalse(errors["flagged"])
                self.assertGreater(errors["balanced"], 0.0)


if __name__ == '__main__':
    unittest.main()
