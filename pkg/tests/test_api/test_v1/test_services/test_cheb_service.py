#!/usr/bin/env python3
"""
Contains tests for Chebyshev tree, polynomial and analytic networks
"""
import math
import unittest

import numpy as np
from numpy.polynomial import chebyshev as C

from api.v1.services.cheb_service import (analytic_net, cheb_coeffs,
                                          cheb_tree_net,
                                          clenshaw_curtis_nodes, poly_net,
                                          tree_errors, verify_cheb_trees)
from api.v1.services.emulation_service import product_floor
from models.cheb_expansion import ChebExpansion
from models.errors import DomainError, InputShapeError


class TestChebTree(unittest.TestCase):
    """
    Unit tests for cheb_tree_net.
    """

    def test_base_tree(self):
        """
        Test T_1 and T_2 at a tight tolerance.
        """
        tree = cheb_tree_net("tanh", 2, 1e-3)
        self.assertEqual(tree.depth, 2)
        self.assertEqual(tree.net.output_dim, 2)
        self.assertLessEqual(tree_errors(tree, 2001).max(), 1e-3)

    def test_deeper_trees(self):
        """
        Test tolerance and logarithmic depth for several m.
        """
        for name in ("tanh", "sigmoid"):
            for m in (3, 4, 5, 8):
                with self.subTest(activation=name, m=m):
                    tree = cheb_tree_net(name, m, 1e-2)
                    self.assertEqual(tree.depth,
                                     int(math.ceil(math.log2(m))) + 1)
                    self.assertLessEqual(tree_errors(tree, 2001).max(), 1e-2)

    def test_level_tolerances(self):
        """
        Test the per-level tolerances propagated from delta.
        """
        delta = 1e-2
        tree = cheb_tree_net("tanh", 8, delta)
        self.assertEqual(len(tree.thetas), 3)
        for theta, expected in zip(tree.thetas,
                                   (delta / 480, delta / 3840, delta / 7680)):
            self.assertAlmostEqual(theta / expected, 1.0, places=12)

    def test_tolerances_respect_product_floor(self):
        """
        Test that tolerances below the float64 floor are raised to it.
        """
        tree = cheb_tree_net("tanh", 32, 1e-6)
        self.assertEqual(len(tree.thetas), 5)
        self.assertEqual(tree.thetas[-1], product_floor("tanh", 1.0))
        self.assertTrue(all(theta > 0 for theta in tree.thetas))

    def test_tanh_accuracy_grid(self):
        """
        Test every output against delta for m up to 32 and small delta.
        """
        for m in (2, 4, 8, 16, 32):
            for delta in (1e-2, 1e-4, 1e-6):
                with self.subTest(m=m, delta=delta):
                    tree = cheb_tree_net("tanh", m, delta)
                    self.assertEqual(tree.depth,
                                     int(math.ceil(math.log2(m))) + 1)
                    self.assertLessEqual(tree_errors(tree, 4001).max(), delta)

    def test_sigmoid_accuracy_grid(self):
        """
        Test sigmoid trees for m up to 16.
        """
        for m in (2, 4, 8, 16):
            for delta in (1e-2, 1e-4):
                with self.subTest(m=m, delta=delta):
                    tree = cheb_tree_net("sigmoid", m, delta)
                    self.assertLessEqual(tree_errors(tree, 4001).max(), delta)

    def test_relu_tree(self):
        """
        Test a ReLU tree at a small tolerance.
        """
        tree = cheb_tree_net("relu", 8, 1e-4)
        self.assertAlmostEqual(tree.thetas[-1] / (1e-4 / 7680), 1.0, places=12)
        self.assertLessEqual(tree_errors(tree, 4001).max(), 1e-4)

    def test_invalid(self):
        """
        Test the degree and tolerance checks.
        """
        with self.assertRaises(DomainError):
            cheb_tree_net("tanh", 1, 1e-2)
        with self.assertRaises(DomainError):
            cheb_tree_net("tanh", 4, 1.0)

    def test_verify(self):
        """
        Test the verification rows.
        """
        rows = verify_cheb_trees("tanh", [2, 4], [1e-2], samples=1001)
        self.assertEqual([row["m"] for row in rows], [2, 4])
        for row in rows:
            self.assertTrue(row["passed"])
            self.assertEqual(row["depth"], row["expected_depth"])
            self.assertAlmostEqual(row["size_per_m"], row["size"] / row["m"])


class TestPolynomialNets(unittest.TestCase):
    """
    Unit tests for the interpolation helpers and polynomial networks.
    """

    def test_nodes(self):
        """
        Test the Clenshaw-Curtis nodes.
        """
        np.testing.assert_allclose(clenshaw_curtis_nodes(2), [1.0, 0.0, -1.0],
                                   atol=1e-15)
        np.testing.assert_array_equal(clenshaw_curtis_nodes(0), [1.0])

    def test_coefficients_of_a_polynomial(self):
        """
        Test that interpolating a degree-p polynomial is exact.
        """
        v = np.array([0.5, -1.0, 0.25, 2.0])
        samples = C.chebval(clenshaw_curtis_nodes(3), v)
        np.testing.assert_allclose(cheb_coeffs(samples, 3).coefficients, v,
                                   atol=1e-14)
        with self.assertRaises(InputShapeError):
            cheb_coeffs(samples, 4)

    def test_affine_expansions_are_exact(self):
        """
        Test that degree 0 and 1 give one affine layer.
        """
        net = poly_net("tanh", ChebExpansion([1.0, 3.0]), 1e-2)
        self.assertEqual(net.depth, 1)
        np.testing.assert_allclose(net([0.5]), [2.5])

    def test_poly_net_error(self):
        """
        Test the bound delta * sum_{k>=1} |v_k|.
        """
        v = ChebExpansion([0.1, 0.5, -0.3, 0.2, 0.1])
        delta = 1e-2
        net = poly_net("sigmoid", v, delta)
        x = np.cos(np.linspace(0.0, np.pi, 1001))
        values, derivs = net.scalar(x)
        bound = delta * v.l1_tail()
        self.assertLessEqual(np.max(np.abs(values - v(x))), bound)
        self.assertLessEqual(np.max(np.abs(derivs - v.derivative(x))), bound)

    def test_hidden_layers_depend_on_degree_only(self):
        """
        Test that expansions of one degree share hidden layers.
        """
        a = poly_net("tanh", ChebExpansion([0.0, 1.0, 2.0, 3.0]), 1e-2)
        b = poly_net("tanh", ChebExpansion([5.0, -1.0, 0.0, 0.5]), 1e-2)
        self.assertTrue(a.same_hidden_layers(b))

    def test_analytic_net(self):
        """
        Test the emulation of exp on [-1, 1].
        """
        net = analytic_net("tanh", np.exp, 8, 1e-2)
        x = np.linspace(-1.0, 1.0, 501)
        values, derivs = net.scalar(x)
        self.assertLess(np.max(np.abs(values - np.exp(x))), 5e-2)
        self.assertLess(np.max(np.abs(derivs - np.exp(x))), 5e-2)


if __name__ == '__main__':
    unittest.main()
