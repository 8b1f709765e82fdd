#!/usr/bin/env python3
"""
Contains tests for Mesh, ChebExpansion and PiecewisePolynomial
"""
import unittest

import numpy as np

from models.cheb_expansion import ChebExpansion
from models.errors import DomainError, InputShapeError
from models.mesh import Mesh
from models.piecewise_polynomial import PiecewisePolynomial


class TestMesh(unittest.TestCase):
    """
    Unit tests for the Mesh type.
    """

    def test_valid_mesh(self):
        """
        Test element access and widths.
        """
        mesh = Mesh([-1.0, -0.5, 1.0])
        self.assertEqual(mesh.num_elements, 2)
        np.testing.assert_allclose(mesh.widths, [0.5, 1.5])
        self.assertEqual(mesh.element(1), (-0.5, 1.0))

    def test_invalid_meshes(self):
        """
        Test that endpoints and ordering are checked.
        """
        for nodes in ([-1.0], [-0.9, 1.0], [-1.0, 0.5, 0.2, 1.0]):
            with self.subTest(nodes=nodes):
                with self.assertRaises(DomainError):
                    Mesh(nodes)

    def test_locate(self):
        """
        Test that interior nodes belong to the element on their right.
        """
        mesh = Mesh([-1.0, 0.0, 1.0])
        np.testing.assert_array_equal(mesh.locate([-1.0, -0.2, 0.0, 1.0]),
                                      [0, 0, 1, 1])
        np.testing.assert_allclose(mesh.to_reference([0.0, 0.5], [1, 1]),
                                   [-1.0, 0.0])


class TestChebExpansion(unittest.TestCase):
    """
    Unit tests for the ChebExpansion type.
    """

    def test_evaluation(self):
        """
        Test T_2(x) = 2x^2 - 1 and its derivative.
        """
        t2 = ChebExpansion([0.0, 0.0, 1.0])
        x = np.array([-1.0, 0.3, 1.0])
        values, derivs = t2.evaluate(x)
        np.testing.assert_allclose(values, 2 * x ** 2 - 1)
        np.testing.assert_allclose(derivs, 4 * x)
        self.assertEqual(t2.degree, 2)

    def test_constant(self):
        """
        Test the derivative and tail of a constant.
        """
        c = ChebExpansion([3.0])
        np.testing.assert_array_equal(c.derivative([0.1, 0.2]), [0.0, 0.0])
        self.assertEqual(c.l1_tail(), 0.0)
        self.assertEqual(ChebExpansion([5.0, -1.0, 2.0]).l1_tail(), 3.0)


class TestPiecewisePolynomial(unittest.TestCase):
    """
    Unit tests for the PiecewisePolynomial class.
    """

    def setUp(self):
        """
        The hat function 1 - |x| on the mesh {-1, 0, 1}.
        """
        self.hat = PiecewisePolynomial([-1.0, 0.0, 1.0],
                                       [[0.5, 0.5], [0.5, -0.5]])

    def test_evaluate(self):
        """
        Test values and slopes of the hat.
        """
        values, derivs = self.hat.evaluate([-1.0, -0.5, 0.25, 1.0])
        np.testing.assert_allclose(values, [0.0, 0.5, 0.75, 0.0])
        np.testing.assert_allclose(derivs, [1.0, 1.0, -1.0, -1.0])

    def test_outside_domain(self):
        """
        Test that points outside [-1, 1] are rejected.
        """
        with self.assertRaises(DomainError):
            self.hat([1.5])
        np.testing.assert_allclose(self.hat([1.0 + 1e-13]), [0.0], atol=1e-12)

    def test_continuity_and_trace(self):
        """
        Test the jump measure and the boundary check.
        """
        self.assertAlmostEqual(self.hat.continuity_defect(), 0.0)
        self.assertTrue(self.hat.has_zero_trace)
        jump = PiecewisePolynomial([-1.0, 0.0, 1.0], [[1.0, 0.0], [0.0, 0.0]])
        self.assertAlmostEqual(jump.continuity_defect(), 1.0)
        self.assertFalse(jump.has_zero_trace)

    def test_row_count(self):
        """
        Test that the coefficient rows must match the elements.
        """
        with self.assertRaises(InputShapeError):
            PiecewisePolynomial([-1.0, 1.0], [[0.0, 1.0], [0.0, 1.0]])

    def test_json(self):
        """
        Test the stored form.
        """
        data = self.hat.to_json()
        self.assertEqual(data["nodes"], [-1.0, 0.0, 1.0])
        copy = PiecewisePolynomial.from_json(data)
        self.assertEqual(copy.id, self.hat.id)
        np.testing.assert_array_equal(copy.coefficients,
                                      self.hat.coefficients)
        self.assertEqual(copy.element_expansion(1).degree, 1)


if __name__ == '__main__':
    unittest.main()
