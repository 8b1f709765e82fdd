#!/usr/bin/env python3
"""
Contains tests for Term, BvpProblem, the solution recipe types and the
study records
"""
import math
import unittest

import numpy as np

from models.error_report import CSV_COLUMNS, ErrorReport, Method
from models.errors import ConfigError, DomainError
from models.problem import BvpProblem, Term, TermKind
from models.solution_recipe import Regime, Side, SolutionNetRecipe


class TestTerm(unittest.TestCase):
    """
    Unit tests for the Term type.
    """

    def test_families(self):
        """
        Test evaluation of each declarative family.
        """
        x = np.array([-1.0, 0.0, 1.0])
        np.testing.assert_allclose(Term.constant(2.0)(x), [2.0, 2.0, 2.0])
        np.testing.assert_allclose(Term.exponential(1.0, 3.0)(x),
                                   3.0 * np.exp(x))
        np.testing.assert_allclose(Term.polynomial([1.0, 0.0, 2.0])(x),
                                   [3.0, 1.0, 3.0])
        np.testing.assert_allclose(Term.function(np.sin)(x), np.sin(x))

    def test_is_constant(self):
        """
        Test constant detection across families.
        """
        self.assertTrue(Term.polynomial([4.0]).is_constant)
        self.assertTrue(Term.exponential(0.0, 2.0).is_constant)
        self.assertEqual(Term.exponential(0.0, 2.0).constant_value, 2.0)
        self.assertFalse(Term.polynomial([1.0, 1.0]).is_constant)
        with self.assertRaises(DomainError):
            Term.function(np.cos).constant_value

    def test_scaled(self):
        """
        Test that scaling keeps the family.
        """
        term = Term.exponential(2.0).scaled(-0.5)
        self.assertIs(term.kind, TermKind.EXPONENTIAL)
        self.assertAlmostEqual(float(term(np.zeros(1))[0]), -0.5)

    def test_analyticity(self):
        """
        Test the (C, K) constants of simple terms.
        """
        self.assertEqual(Term.constant(-3.0).analyticity(), (3.0, 1.0))
        c, k = Term.exponential(2.0).analyticity()
        self.assertAlmostEqual(c, math.exp(2.0))
        self.assertEqual(k, 2.0)
        self.assertTrue(math.isnan(Term.function(np.sin).analyticity()[0]))

    def test_json(self):
        """
        Test the declarative form and its errors.
        """
        self.assertEqual(Term.from_json(2).value, 2.0)
        term = Term.from_json({"kind": "polynomial",
                               "coefficients": [1, 2]})
        self.assertEqual(term.to_json(),
                         {"kind": "polynomial", "coefficients": [1.0, 2.0]})
        for bad in ({"kind": "spline"}, {"kind": "constant"}):
            with self.subTest(term=bad):
                with self.assertRaises(ConfigError):
                    Term.from_json(bad)
        with self.assertRaises(ConfigError):
            Term.function(np.sin).to_json()


class TestBvpProblem(unittest.TestCase):
    """
    Unit tests for the BvpProblem type.
    """

    def test_defaults(self):
        """
        Test the default b = f = 1.
        """
        problem = BvpProblem(0.1)
        self.assertTrue(problem.has_constant_b)
        self.assertEqual(problem.b_min, 1.0)
        self.assertEqual(problem.with_epsilon(0.5).epsilon, 0.5)

    def test_invalid(self):
        """
        Test the epsilon range and positivity of b.
        """
        for eps in (0.0, -1.0, 1.5):
            with self.subTest(epsilon=eps):
                with self.assertRaises(DomainError):
                    BvpProblem(eps)
        with self.assertRaises(DomainError):
            BvpProblem(0.5, b=Term.polynomial([0.0, 1.0]))

    def test_from_json(self):
        """
        Test configuration parsing and its errors.
        """
        problem = BvpProblem.from_json(
            {"epsilon": 0.01, "b": 2.0,
             "f": {"kind": "exponential", "rate": 1.0}})
        self.assertEqual(problem.b_min, 2.0)
        self.assertEqual(problem.to_json()["f"]["kind"], "exponential")
        with self.assertRaises(ConfigError):
            BvpProblem.from_json({"b": 1.0})
        with self.assertRaises(ConfigError):
            BvpProblem.from_json({"epsilon": 2.0})


class TestSolutionRecipeTypes(unittest.TestCase):
    """
    Unit tests for Regime, Side and SolutionNetRecipe.
    """

    def test_regime(self):
        """
        Test the asymptotic threshold kappa p eps >= 1/2.
        """
        self.assertIs(Regime.classify(1.0, 5, 0.1), Regime.ASYMPTOTIC)
        self.assertIs(Regime.classify(1.0, 4, 0.1), Regime.PRE_ASYMPTOTIC)
        self.assertIs(Regime.from_str("Asymptotic"), Regime.ASYMPTOTIC)

    def test_side(self):
        """
        Test side aliases and signs.
        """
        self.assertIs(Side.from_str("left"), Side.MINUS)
        self.assertEqual(Side.PLUS.sign, 1.0)
        with self.assertRaises(ValueError):
            Side.from_str("up")

    def test_recipe_constants(self):
        """
        Test the tolerance, range bound and depth.
        """
        recipe = SolutionNetRecipe(0.01, 8, 1.0, 0.5, Regime.PRE_ASYMPTOTIC,
                                   np.zeros_like)
        self.assertAlmostEqual(recipe.tolerance, math.exp(-4.0) * 0.01)
        self.assertAlmostEqual(recipe.range_bound, 201.0)
        self.assertEqual(recipe.depth, 4)


class TestErrorReport(unittest.TestCase):
    """
    Unit tests for the study records.
    """

    def test_method(self):
        """
        Test method parsing.
        """
        self.assertIs(Method.from_str("FEM-interp"), Method.FEM_INTERP)
        self.assertFalse(Method.FEM.is_network)
        self.assertTrue(Method.SNN.is_network)
        with self.assertRaises(ValueError):
            Method.from_str("spectral")

    def test_rows(self):
        """
        Test the CSV row order and the JSON form.
        """
        report = ErrorReport("relu", 3, 0.1, 1.0, 2.0, 3.0, 4.0, 5.0,
                             depth=6, size=7, walltime_ms=8.0)
        self.assertEqual(report.csv_row(),
                         ["relu", 3, 0.1, 1.0, 2.0, 3.0, 4.0, 5.0, 6, 7, 8.0])
        self.assertEqual(len(CSV_COLUMNS), 11)
        self.assertNotIn("extra", report.to_json())
        report.extra["snn_max_rel"] = 0.0
        self.assertIn("extra", report.to_json())


if __name__ == '__main__':
    unittest.main()
