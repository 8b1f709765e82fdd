#!/usr/bin/env python3
"""
ReLU networks emulating continuous piecewise polynomials, and the
networks built from them for the finite element solution and for the
exponential boundary layer.

A piecewise polynomial v of degree p on a mesh is split into its piecewise
linear interpolant, represented exactly by ReLU(x - x_j) features, and one
bubble per element. The bubble of element [a, b] feeds the exactly clamped
reference coordinate s = 1 - (2/h) ReLU(h - ReLU(x - a)) into a ReLU
Chebyshev tree and outputs sum_{k>=2} v_k (T_k - L_k) where L_k linearly
interpolates the tree's own values at s = -1 and s = 1. Outside its element
the clamp is constant, so the bubble vanishes there up to rounding.
Hidden layers depend only on the mesh, p and tau; v enters the output
layer linearly.

Classes:
    - ReluEmulationReport: Measured accuracy of an emulation.

Functions:
    - pw_poly_relu_net: Network and report for a piecewise polynomial.
    - fem_relu_net: Emulation of the Galerkin solution on sbl_mesh.
    - exp_interpolant: The piecewise polynomial exp_relu_net emulates.
    - exp_relu_net: Emulation of exp(-x/eps) on (0, 1).
"""
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np

from api.v1.services.calculus_service import (affine_net, concatenate,
                                              scale_output, sum_many)
from api.v1.services.cheb_service import cheb_tree_net
from api.v1.services.fem_service import (bl_mesh_sshwab, galerkin_solve,
                                         gl_interpolant, sbl_mesh)
from models.errors import DomainError
from models.network import Network
from models.piecewise_polynomial import PiecewisePolynomial
from models.problem import BvpProblem

logger = logging.getLogger(__name__)

# Chebyshev tree tolerance is tau / (_TREE_SAFETY (p - 1)).
_TREE_SAFETY = 32.0
_REPORT_SAMPLES = 201


@dataclass
class ReluEmulationReport:
    """
    Measured accuracy of a piecewise polynomial emulation.

    Attributes:
        tau (float): Requested relative tolerance.
        element_errors (list): Sampled W^{1,inf} error on each element
            relative to the W^{1,inf} norm of v there.
        node_residual (float): max_j |R(x_j) - v(x_j)|.
        depth, size (int): Of the network.
    """
    tau: float
    element_errors: List[float] = field(default_factory=list)
    node_residual: float = 0.0
    depth: int = 0
    size: int = 0

    @property
    def max_element_error(self) -> float:
        return max(self.element_errors, default=0.0)

    def to_json(self) -> Dict[str, Any]:
        return asdict(self)


def _linear_part(nodes: np.ndarray, values: np.ndarray,
                 depth: int) -> Network:
    """
    Exact piecewise linear interpolant of (nodes, values) as a depth-L
    ReLU net: features ReLU(x - x_j) are nonnegative, so identity hidden
    layers carry them unchanged.
    """
    slopes = np.diff(values) / np.diff(nodes)
    weights = np.concatenate([slopes[:1], np.diff(slopes)])
    n = slopes.size
    layers = [(np.ones((n, 1)), -nodes[:-1])]
    layers += [(np.eye(n), np.zeros(n))] * (depth - 2)
    layers.append((weights[None, :], [values[0]]))
    return Network(layers, "relu")


def _clamp(a: float, b: float) -> Network:
    """Depth-3 ReLU net of the reference coordinate, constant off [a, b]."""
    h = b - a
    return Network([([[1.0]], [-a]), ([[-1.0]], [h]),
                    ([[-2.0 / h]], [1.0])], "relu")


def _bubble(tree: Network, a: float, b: float,
            coefficients: np.ndarray) -> Network:
    """sum_{k>=2} v_k (T^_k - L^_k(T^_1)) for the element [a, b]."""
    local = concatenate(tree, _clamp(a, b))
    ends = local(np.array([[a], [b]]))
    t1_left, t1_right = ends[0, 0], ends[1, 0]
    span = t1_right - t1_left
    # L^_k(t) = alpha_k + beta_k t through (T^_1, T^_k) at both ends.
    beta = (ends[1, 1:] - ends[0, 1:]) / span
    alpha = ends[0, 1:] - beta * t1_left
    c = coefficients[2:]
    row = np.concatenate([[-(c @ beta)], c])
    return scale_output(local, row[None, :], [-(c @ alpha)])


def _element_errors(net: Network, v: PiecewisePolynomial) -> List[float]:
    errors = []
    inner = np.linspace(0.0, 1.0, _REPORT_SAMPLES)[1:-1]
    for j in range(v.mesh.num_elements):
        a, b = v.mesh.element(j)
        x = a + (b - a) * inner
        value, deriv = net.scalar(x)
        exact, exact_deriv = v.evaluate(x)
        norm = max(float(np.max(np.abs(exact))),
                   float(np.max(np.abs(exact_deriv))))
        err = max(float(np.max(np.abs(value - exact))),
                  float(np.max(np.abs(deriv - exact_deriv))))
        errors.append(err / norm if norm > 0 else err)
    return errors


def pw_poly_relu_net(v: PiecewisePolynomial,
                     tau: float) -> Tuple[Network, ReluEmulationReport]:
    """
    ReLU network approximating v within relative tolerance tau.

    Degree 1 gives the exact depth-2 interpolant. Higher degrees add one
    bubble per element built on cheb_tree_net(relu, p, tau/(32 (p-1))).

    Args:
        v (PiecewisePolynomial): Continuous piecewise polynomial.
        tau (float): Relative tolerance in (0, 1).

    Returns:
        tuple: (Network, ReluEmulationReport).

    Raises:
        DomainError: If tau is not in (0, 1).
    """
    if not 0.0 < tau < 1.0:
        raise DomainError(f"Invalid tolerance: {tau}. Must be in (0, 1)")
    nodes = v.mesh.nodes
    limits = v.node_values()
    values = 0.5 * (limits[:, 0] + limits[:, 1])
    p = v.degree
    if p <= 1:
        net = _linear_part(nodes, values, 2)
    else:
        tree = cheb_tree_net("relu", p, tau / (_TREE_SAFETY * (p - 1))).net
        bubbles = [_bubble(tree, *v.mesh.element(j), v.coefficients[j])
                   for j in range(v.mesh.num_elements)]
        depth = bubbles[0].depth
        net = sum_many([_linear_part(nodes, values, depth)] + bubbles)
    residual = float(np.max(np.abs(net.scalar(nodes)[0] - values)))
    report = ReluEmulationReport(tau, _element_errors(net, v), residual,
                                 net.depth, net.size)
    logger.debug("pw_poly_relu_net p=%d elements=%d tau=%.3e depth=%d "
                 "size=%d max_rel=%.3e", p, v.mesh.num_elements, tau,
                 net.depth, net.size, report.max_element_error)
    return net, report


def fem_relu_net(problem: BvpProblem, kappa: float, p: int,
                 beta: float) -> Network:
    """
    pw_poly_relu_net of the Galerkin solution on sbl_mesh(kappa, p, eps)
    with tau = exp(-beta p).
    """
    solution = galerkin_solve(problem, sbl_mesh(kappa, p, problem.epsilon),
                              p)
    return pw_poly_relu_net(solution, math.exp(-beta * p))[0]


def exp_interpolant(epsilon: float, kappa: float,
                    p: int) -> PiecewisePolynomial:
    """
    Gauss-Lobatto interpolant of exp(-(1 + y)/(2 eps)) on
    bl_mesh_sshwab(kappa, p, 2 eps), in y = 2x - 1.

    Raises:
        DomainError: If eps is not in (0, 1] or kappa >= 4/e.
    """
    if not 0.0 < epsilon <= 1.0:
        raise DomainError(f"Invalid epsilon: {epsilon}. Must be in (0, 1]")
    mesh = bl_mesh_sshwab(kappa, p, 2.0 * epsilon)
    return gl_interpolant(lambda y: np.exp(-(1.0 + y) / (2.0 * epsilon)),
                          mesh, p)


def exp_relu_net(epsilon: float, kappa: float, p: int,
                 beta: float) -> Network:
    """
    ReLU network approximating exp(-x/eps) on (0, 1).

    exp_interpolant(eps, kappa, p) is emulated with tau = exp(-beta p)
    and composed with P(x) = 2x - 1, so the mesh in x is
    {0, kappa (p + 1/2) eps, 1} or {0, 1}.

    Raises:
        DomainError: If eps is not in (0, 1] or kappa >= 4/e.
    """
    v = exp_interpolant(epsilon, kappa, p)
    net, _ = pw_poly_relu_net(v, math.exp(-beta * p))
    return concatenate(net, affine_net([[2.0]], [-1.0], "relu"))
