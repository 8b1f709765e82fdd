#!/usr/bin/env python3
"""
Contains tests for ReLU emulation of piecewise polynomials
"""
import math
import unittest

import numpy as np

from api.v1.services.fem_service import (galerkin_solve, gl_interpolant,
                                         sbl_mesh)
from api.v1.services.relu_service import (exp_interpolant, exp_relu_net,
                                          fem_relu_net, pw_poly_relu_net)
from models.errors import DomainError
from models.mesh import Mesh
from models.piecewise_polynomial import PiecewisePolynomial
from models.problem import BvpProblem

GRID = np.linspace(-1.0, 1.0, 801)


class TestPwPolyReluNet(unittest.TestCase):
    """
    Unit tests for pw_poly_relu_net.
    """

    def test_linear_is_exact(self):
        """
        Test that degree 1 gives the exact interpolant.
        """
        hat = PiecewisePolynomial([-1.0, 0.0, 1.0], [[0.5, 0.5], [0.5, -0.5]])
        net, report = pw_poly_relu_net(hat, 0.1)
        self.assertEqual(net.depth, 2)
        self.assertTrue(net.activation.is_relu)
        np.testing.assert_allclose(net.scalar(GRID)[0], hat(GRID),
                                   atol=1e-15)
        self.assertEqual(report.node_residual, 0.0)

    def test_higher_degree(self):
        """
        Test the relative tolerance and node values for p = 3.
        """
        mesh = Mesh([-1.0, -0.2, 0.5, 1.0])
        v = gl_interpolant(lambda x: np.sin(3 * x) * (1 - x ** 2), mesh, 3)
        tau = 0.1
        net, report = pw_poly_relu_net(v, tau)
        self.assertEqual(len(report.element_errors), 3)
        self.assertLessEqual(report.max_element_error, tau)
        self.assertLess(report.node_residual, 1e-9)
        self.assertEqual(report.depth, net.depth)
        self.assertEqual(report.to_json()["size"], net.size)

    def test_hidden_layers_do_not_depend_on_values(self):
        """
        Test that v only enters the output layer.
        """
        mesh = Mesh([-1.0, 0.0, 1.0])
        a = gl_interpolant(np.cos, mesh, 2)
        b = gl_interpolant(lambda x: x ** 2 - 1, mesh, 2)
        self.assertTrue(pw_poly_relu_net(a, 0.2)[0].same_hidden_layers(
            pw_poly_relu_net(b, 0.2)[0]))

    def test_invalid_tolerance(self):
        """
        Test the tolerance range.
        """
        hat = PiecewisePolynomial([-1.0, 1.0], [[0.0, 1.0]])
        for tau in (0.0, 1.0):
            with self.subTest(tau=tau):
                with self.assertRaises(DomainError):
                    pw_poly_relu_net(hat, tau)


class TestSolutionEmulations(unittest.TestCase):
    """
    Unit tests for fem_relu_net and exp_relu_net.
    """

    def test_fem_relu_net(self):
        """
        Test that the network emulates the Galerkin solution.
        """
        problem = BvpProblem(0.1)
        net = fem_relu_net(problem, 1.0, 2, 1.0)
        u = galerkin_solve(problem, sbl_mesh(1.0, 2, 0.1), 2)
        expected, report = pw_poly_relu_net(u, math.exp(-2.0))
        np.testing.assert_array_equal(net.scalar(GRID)[0],
                                      expected.scalar(GRID)[0])
        self.assertLessEqual(report.max_element_error, math.exp(-2.0))

    def test_exp_relu_net(self):
        """
        Test the wall values and convergence in p.
        """
        eps = 0.1
        x = np.linspace(0.0, 1.0, 1001)
        errors = []
        for p in (2, 6):
            net = exp_relu_net(eps, 1.0, p, 1.5)
            values, _ = net.scalar(x)
            self.assertAlmostEqual(float(values[0]), 1.0, places=9)
            errors.append(np.max(np.abs(values - np.exp(-x / eps))))
        self.assertLess(errors[1], errors[0] / 5)

    def test_exp_interpolant(self):
        """
        Test that the emulated polynomial interpolates the layer at the
        mesh nodes.
        """
        eps = 1e-3
        v = exp_interpolant(eps, 1.0, 4)
        y = v.mesh.nodes
        values, _ = v.evaluate(y)
        np.testing.assert_allclose(values, np.exp(-(1.0 + y) / (2 * eps)),
                                   rtol=1e-12, atol=1e-14)
        with self.assertRaises(DomainError):
            exp_interpolant(2.0, 1.0, 4)

    def test_exp_relu_net_invalid(self):
        """
        Test the eps check.
        """
        with self.assertRaises(DomainError):
            exp_relu_net(0.0, 1.0, 2, 1.0)


if __name__ == '__main__':
    unittest.main()
