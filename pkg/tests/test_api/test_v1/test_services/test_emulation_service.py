#!/usr/bin/env python3
"""
Contains tests for the identity, square, product and exponential
emulation networks
"""
import math
import unittest

import numpy as np

from api.v1.services.calculus_service import affine_net
from api.v1.services.emulation_service import (exp_net, identity_anchor,
                                               identity_net, pad_depth,
                                               product_floor, product_net,
                                               relu_square_net, square_anchor,
                                               square_floor, square_net)
from models.activation import Activation
from models.errors import CalculusError, ConstructionError, DomainError
from models.network import Network

GRID = np.linspace(-1.0, 1.0, 401)


def _w1inf(net, fn, dfn, x):
    values, derivs = net.scalar(x)
    return max(np.max(np.abs(values - fn(x))), np.max(np.abs(derivs - dfn(x))))


class TestAnchors(unittest.TestCase):
    """
    Unit tests for the activation anchor points.
    """

    def test_builtin_anchors(self):
        """
        Test the closed-form anchors of tanh and sigmoid.
        """
        self.assertEqual(identity_anchor("tanh"), 0.0)
        self.assertEqual(identity_anchor("sigmoid"), 0.0)
        self.assertAlmostEqual(square_anchor("tanh"),
                               math.atanh(1.0 / math.sqrt(3.0)))
        self.assertAlmostEqual(square_anchor("sigmoid"),
                               2.0 * math.atanh(1.0 / math.sqrt(3.0)))

    def test_relu_has_no_square_anchor(self):
        """
        Test that a piecewise linear activation has no square anchor.
        """
        with self.assertRaises(ConstructionError):
            square_anchor("relu")

    def test_custom_anchor(self):
        """
        Test the scanned anchor of a custom activation.
        """
        act = Activation.custom("shifted-tanh-test",
                                lambda z: np.tanh(z - 1.0),
                                lambda z: 1.0 / np.cosh(z - 1.0) ** 2,
                                domain=(-3.0, 3.0))
        self.assertAlmostEqual(identity_anchor(act), 1.0, delta=0.07)


class TestIdentityNet(unittest.TestCase):
    """
    Unit tests for identity_net and pad_depth.
    """

    def test_smooth_identities(self):
        """
        Test the W^{1,inf} tolerance for several depths.
        """
        tau = 1e-3
        for name in ("tanh", "sigmoid"):
            for depth in (2, 3, 4):
                with self.subTest(activation=name, depth=depth):
                    net = identity_net(name, depth, tau, 1.0)
                    self.assertEqual(net.depth, depth)
                    err = _w1inf(net, lambda x: x, np.ones_like, GRID)
                    self.assertLessEqual(err, tau)

    def test_identity_maps_zero_to_zero(self):
        """
        Test that the depth-2 identity is exact at the origin.
        """
        net = identity_net("tanh", 2, 1e-4, 5.0)
        self.assertAlmostEqual(float(net([0.0])[0]), 0.0, places=12)

    def test_large_bound_identities(self):
        """
        Test depth-2 identities on a wide range at a tight tolerance.
        """
        tau, bound = 1.35e-7, 2e6
        x = bound * np.linspace(-1.0, 1.0, 2001)
        for name in ("tanh", "sigmoid"):
            with self.subTest(activation=name):
                net = identity_net(name, 2, tau, bound)
                err = _w1inf(net, lambda x: x, np.ones_like, x)
                self.assertLessEqual(err, tau)
                self.assertEqual(float(net([0.0])[0]), 0.0)

    def test_unreachable_identity_raises(self):
        """
        Test that a tolerance below the float64 floor is refused.
        """
        act = Activation.custom("lifted-tanh-test",
                                lambda z: 5.0 + np.tanh(z),
                                lambda z: 1.0 / np.cosh(z) ** 2)
        with self.assertRaises(ConstructionError):
            identity_net(act, 2, 1e-12, 1.0)

    def test_relu_identity_is_exact(self):
        """
        Test that ReLU identities reproduce the input exactly.
        """
        net = identity_net("relu", 5, 1e-9, 10.0, dim=2)
        self.assertEqual(net.depth, 5)
        x = np.array([[-3.0, 7.0], [0.5, -0.25]])
        np.testing.assert_array_equal(net(x), x)

    def test_invalid_arguments(self):
        """
        Test the depth, tolerance and bound checks.
        """
        for args in ((0, 1e-3, 1.0), (2, 0.0, 1.0), (2, 1e-3, 0.5)):
            with self.subTest(args=args):
                with self.assertRaises(DomainError):
                    identity_net("tanh", *args)

    def test_pad_depth(self):
        """
        Test padding to a larger depth.
        """
        net = exp_net("tanh", 1e-3)
        padded = pad_depth(net, 4, tau=1e-6, bound=2.0)
        self.assertEqual(padded.depth, 4)
        x = np.linspace(0.0, 1.0, 11)
        np.testing.assert_allclose(padded.scalar(x)[0], net.scalar(x)[0],
                                   atol=2e-6)
        self.assertIs(pad_depth(net, 2), net)
        with self.assertRaises(CalculusError):
            pad_depth(net, 1)

    def test_pad_affine_keeps_activation(self):
        """
        Test that a depth-1 net is padded with its recorded activation.
        """
        padded = pad_depth(affine_net([[2.0]], [0.0], "sigmoid"), 3, 1e-6,
                           bound=2.0)
        self.assertEqual(padded.activation.name, "sigmoid")
        np.testing.assert_allclose(padded.scalar(GRID)[0], 2 * GRID,
                                   atol=2e-6)


class TestSquareAndProduct(unittest.TestCase):
    """
    Unit tests for square_net and product_net.
    """

    def test_smooth_square(self):
        """
        Test x^2 on [-M, M] with smooth activations.
        """
        tau = 1e-2
        for name in ("tanh", "sigmoid"):
            for bound in (1.0, 3.0):
                with self.subTest(activation=name, bound=bound):
                    net = square_net(name, tau, bound)
                    self.assertEqual(net.depth, 2)
                    err = _w1inf(net, np.square, lambda x: 2 * x,
                                 bound * GRID)
                    self.assertLessEqual(err, tau)

    def test_tight_square(self):
        """
        Test a square net far below the antiderivative construction's
        rounding level.
        """
        net = square_net("tanh", 1e-10, 2.0)
        self.assertEqual(net.depth, 2)
        self.assertLessEqual(net.widths[1], 24)
        err = _w1inf(net, np.square, lambda x: 2 * x,
                     np.linspace(-2.0, 2.0, 4001))
        self.assertLessEqual(err, 1e-10)

    def test_square_floor(self):
        """
        Test the float64 floors and the refusal below them.
        """
        self.assertLess(square_floor("tanh", 1.0), 1e-11)
        self.assertGreater(square_floor("tanh", 1.0), 0.0)
        self.assertEqual(product_floor("relu", 2.0), 0.0)
        self.assertAlmostEqual(product_floor("tanh", 1.0),
                               6.0 * square_floor("tanh", 1.0))
        with self.assertRaises(ConstructionError):
            square_net("tanh", 1e-15, 1.0)

    def test_relu_square(self):
        """
        Test the sawtooth approximation and its depth.
        """
        net = relu_square_net(1e-2, 1.0)
        self.assertEqual(net.depth, 9)
        x = np.linspace(-1.0, 1.0, 1001)
        values, _ = net.scalar(x)
        self.assertLessEqual(np.max(np.abs(values - x ** 2)), 1e-4)
        # one-sided slopes away from the breakpoints
        mid = np.linspace(-0.99, 0.99, 397) + 1e-7
        _, derivs = net.scalar(mid)
        self.assertLessEqual(np.max(np.abs(derivs - 2 * mid)), 1e-2)
        self.assertAlmostEqual(float(net([0.0])[0]), 0.0, places=12)

    def test_product(self):
        """
        Test x1 x2 on [-1, 1]^2 for tanh and ReLU.
        """
        rng = np.random.default_rng(0)
        x = rng.uniform(-1.0, 1.0, (300, 2))
        for name in ("tanh", "relu"):
            with self.subTest(activation=name):
                net = product_net(name, 1e-2, 1.0)
                result = net.realize(x)
                np.testing.assert_allclose(result.value[:, 0],
                                           x[:, 0] * x[:, 1], atol=1e-2)
                np.testing.assert_allclose(result.jacobian[:, 0, :],
                                           x[:, ::-1], atol=1e-2)

    def test_product_vanishes_on_axes(self):
        """
        Test that a zero factor gives a (numerically) zero product.
        """
        net = product_net("tanh", 1e-3, 1.0)
        x = np.column_stack([np.linspace(-1.0, 1.0, 9), np.zeros(9)])
        np.testing.assert_allclose(net(x)[:, 0], 0.0, atol=1e-8)

    def test_invalid_tolerance(self):
        """
        Test the tolerance and bound checks.
        """
        with self.assertRaises(DomainError):
            square_net("tanh", 0.0, 1.0)
        with self.assertRaises(DomainError):
            product_net("relu", 1e-2, -1.0)


class TestExpNet(unittest.TestCase):
    """
    Unit tests for exp_net.
    """

    def test_tolerance(self):
        """
        Test the value and derivative bounds on x >= 0.
        """
        x = np.linspace(0.0, 30.0, 3001)
        for name in ("tanh", "sigmoid"):
            for tau in (1e-1, 1e-3):
                with self.subTest(activation=name, tau=tau):
                    net = exp_net(name, tau)
                    self.assertEqual(net.size, 4 if name == "tanh" else 3)
                    values, derivs = net.scalar(x)
                    self.assertLessEqual(
                        np.max(np.abs(values - np.exp(-x))), tau / 2)
                    self.assertLessEqual(
                        np.max(np.abs(derivs + np.exp(-x))), tau)

    def test_small_tolerances(self):
        """
        Test the bounds down to tau = 1e-8 on a long half-line.
        """
        x = np.linspace(0.0, 100.0, 100001)
        for name in ("tanh", "sigmoid"):
            for tau in (1e-1, 1e-2, 1e-4, 1e-6, 1e-8):
                with self.subTest(activation=name, tau=tau):
                    values, derivs = exp_net(name, tau).scalar(x)
                    self.assertLessEqual(
                        np.max(np.abs(values - np.exp(-x))), tau / 2 + 1e-14)
                    self.assertLessEqual(
                        np.max(np.abs(derivs + np.exp(-x))), tau + 1e-14)

    def test_activations_agree(self):
        """
        Test that the tanh and sigmoid nets realize the same function.
        """
        x = np.linspace(0.0, 50.0, 5001)
        for tau in (1e-3, 1e-8):
            with self.subTest(tau=tau):
                a = exp_net("tanh", tau).scalar(x)
                b = exp_net("sigmoid", tau).scalar(x)
                np.testing.assert_allclose(a[0], b[0], rtol=1e-12, atol=0)
                np.testing.assert_allclose(a[1], b[1], rtol=1e-12, atol=0)

    def test_invalid(self):
        """
        Test the activation and tolerance checks.
        """
        with self.assertRaises(DomainError):
            exp_net("relu", 1e-3)
        with self.assertRaises(DomainError):
            exp_net("tanh", 2.0)

    def test_is_network(self):
        """
        Test the returned type.
        """
        self.assertIsInstance(exp_net("sigmoid", 0.5), Network)


if __name__ == '__main__':
    unittest.main()
