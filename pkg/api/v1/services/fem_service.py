#!/usr/bin/env python3
"""
hp finite elements for -eps^2 u'' + b u = f on (-1, 1) with u(+-1) = 0.

Discrete functions are PiecewisePolynomial objects (one Chebyshev
expansion per element). The Galerkin solver uses vertex hat functions and
Chebyshev bubbles T_k - 1 (k even) and T_k - s (k odd) on the reference
element, per-element Gauss-Legendre quadrature with 2p + 4 points and a
Jacobi-scaled dense Cholesky solve.

Functions:
    - sbl_mesh: Spectral boundary-layer mesh.
    - bl_mesh_sshwab: Boundary-layer mesh with p + 1/2 scaling.
    - gauss_lobatto_rule: Gauss-Lobatto points and weights.
    - gl_interpolant: Element-wise Gauss-Lobatto interpolant.
    - galerkin_solve: The discrete solution in S^p_0(mesh).
    - bilinear_form, load_functional: The variational forms.
    - evaluate_pw: Values and derivatives of a piecewise polynomial.
    - hp_reference, hp_reference_gap: Self-convergence reference.
"""
import logging
import math
from typing import Any, Callable, Tuple

import numpy as np
import scipy.linalg
from numpy.polynomial import chebyshev as C
from numpy.polynomial import legendre

from config import Config
from models.errors import DomainError, SolverError
from models.mesh import Mesh
from models.piecewise_polynomial import PiecewisePolynomial
from models.problem import BvpProblem

logger = logging.getLogger(__name__)

KAPPA_MAX = 4.0 / math.e
_NEWTON_TOL = 1e-14
_NEWTON_MAX_ITER = 100


def _check_params(kappa: float, p: int, epsilon: float,
                  eps_max: float = 1.0) -> None:
    if not kappa > 0:
        raise DomainError(f"Invalid kappa: {kappa}. Must be positive")
    if p < 1:
        raise DomainError(f"Invalid degree: {p}. Must be >= 1")
    if not 0.0 < epsilon <= eps_max:
        raise DomainError(
            f"Invalid epsilon: {epsilon}. Must be in (0, {eps_max:g}]")


def sbl_mesh(kappa: float, p: int, epsilon: float) -> Mesh:
    """
    Spectral boundary-layer mesh.

    {-1, -1 + kappa p eps, 1 - kappa p eps, 1} if kappa p eps < 1/2,
    otherwise the single element {-1, 1}.

    Raises:
        DomainError: If kappa <= 0, p < 1 or eps is not in (0, 1].
    """
    _check_params(kappa, p, epsilon)
    width = kappa * p * epsilon
    if width < 0.5:
        return Mesh([-1.0, -1.0 + width, 1.0 - width, 1.0])
    return Mesh([-1.0, 1.0])


def bl_mesh_sshwab(kappa: float, p: int, epsilon: float) -> Mesh:
    """
    One-sided boundary-layer mesh {-1, -1 + kappa (p + 1/2) eps, 1} if
    kappa (p + 1/2) eps < 2, otherwise {-1, 1}.

    eps may be up to 2 so that the mesh of the 2 eps layer exists for
    every eps in (0, 1].

    Raises:
        DomainError: If kappa >= 4/e or the other parameters are invalid.
    """
    _check_params(kappa, p, epsilon, eps_max=2.0)
    if kappa >= KAPPA_MAX:
        raise DomainError(
            f"Invalid kappa: {kappa}. Must be < 4/e = {KAPPA_MAX:.6f}")
    width = kappa * (p + 0.5) * epsilon
    if width < 2.0:
        return Mesh([-1.0, -1.0 + width, 1.0])
    return Mesh([-1.0, 1.0])


def gauss_lobatto_rule(p: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    The p + 1 Gauss-Lobatto-Legendre nodes (ascending) and weights.

    Nodes are the zeros of (1 - x^2) P_p'(x), found by Newton's method on
    the Legendre three-term recursion from the Chebyshev-Gauss-Lobatto
    points.

    Raises:
        DomainError: If p < 1.
    """
    if p < 1:
        raise DomainError(f"Invalid degree: {p}. Must be >= 1")
    x = np.cos(np.pi * np.arange(p + 1) / p)
    vand = np.zeros((p + 1, p + 1))
    for _ in range(_NEWTON_MAX_ITER):
        vand[:, 0] = 1.0
        vand[:, 1] = x
        for k in range(1, p):
            vand[:, k + 1] = ((2 * k + 1) * x * vand[:, k] -
                              k * vand[:, k - 1]) / (k + 1)
        step = (x * vand[:, p] - vand[:, p - 1]) / ((p + 1) * vand[:, p])
        x = x - step
        if np.max(np.abs(step)) <= _NEWTON_TOL:
            break
    else:
        logger.warning("Gauss-Lobatto Newton iteration for p=%d stopped "
                       "after %d steps", p, _NEWTON_MAX_ITER)
    weights = 2.0 / (p * (p + 1) * legendre.legval(x, [0] * p + [1]) ** 2)
    order = np.argsort(x)
    nodes = x[order]
    nodes[0], nodes[-1] = -1.0, 1.0
    return nodes, weights[order]


def gl_interpolant(u: Callable[[np.ndarray], np.ndarray], mesh: Mesh,
                   p: int) -> PiecewisePolynomial:
    """
    Element-wise interpolant of u at the p + 1 Gauss-Lobatto points.

    Element endpoints are sampled at the mesh nodes themselves, so
    neighbouring elements share their node values.

    Args:
        u: Vectorized function on [-1, 1].
        mesh (Mesh): The partition.
        p (int): Degree >= 1.
    """
    s = gauss_lobatto_rule(p)[0]
    vander = C.chebvander(s, p)
    rows = []
    for j in range(mesh.num_elements):
        a, b = mesh.element(j)
        x = 0.5 * (a + b) + 0.5 * (b - a) * s
        x[0], x[-1] = a, b
        values = np.asarray(u(x), dtype=float) + 0.0 * x
        rows.append(np.linalg.solve(vander, values))
    return PiecewisePolynomial(mesh, np.array(rows))


def _local_basis(s: np.ndarray, p: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Values and s-derivatives of the p + 1 local shape functions.

    Column 0 is the left hat (1 - s)/2, column 1 the right hat (1 + s)/2,
    column k >= 2 the bubble T_k - T_{k mod 2}.
    """
    values = np.empty((s.size, p + 1))
    derivs = np.empty((s.size, p + 1))
    values[:, 0] = 0.5 * (1.0 - s)
    values[:, 1] = 0.5 * (1.0 + s)
    derivs[:, 0] = -0.5
    derivs[:, 1] = 0.5
    for k in range(2, p + 1):
        coeffs = np.zeros(k + 1)
        coeffs[k] = 1.0
        coeffs[k % 2] -= 1.0
        values[:, k] = C.chebval(s, coeffs)
        derivs[:, k] = C.chebval(s, C.chebder(coeffs))
    return values, derivs


def _dof_map(num_elements: int, p: int) -> np.ndarray:
    """Global dof of every local shape function; -1 for boundary hats."""
    vertices = num_elements - 1
    dofs = np.full((num_elements, p + 1), -1, dtype=int)
    for j in range(num_elements):
        if j > 0:
            dofs[j, 0] = j - 1
        if j < num_elements - 1:
            dofs[j, 1] = j
        dofs[j, 2:] = vertices + j * (p - 1) + np.arange(p - 1)
    return dofs


def _to_chebyshev(local: np.ndarray) -> np.ndarray:
    """Chebyshev coefficients of ua hat_0 + ub hat_1 + sum_k d_k bubble_k."""
    ua, ub = local[0], local[1]
    coeffs = np.array(local, dtype=float)
    coeffs[0] = 0.5 * (ua + ub) - local[2::2].sum()
    coeffs[1] = 0.5 * (ub - ua) - local[3::2].sum()
    return coeffs


def galerkin_solve(problem: BvpProblem, mesh: Mesh,
                   p: int) -> PiecewisePolynomial:
    """
    The Galerkin approximation u in S^p_0(mesh) of problem.

    Solves int eps^2 u' v' + b u v = int f v for every v in S^p_0(mesh).
    The stiffness matrix is symmetrically scaled by its diagonal before
    the Cholesky solve.

    Args:
        problem (BvpProblem): eps, b and f.
        mesh (Mesh): The partition.
        p (int): Polynomial degree >= 1.

    Returns:
        PiecewisePolynomial: The solution, zero at +-1.

    Raises:
        DomainError: If p < 1.
        SolverError: If the scaled system is singular or not positive
            definite.
    """
    if p < 1:
        raise DomainError(f"Invalid degree: {p}. Must be >= 1")
    n_el = mesh.num_elements
    dofs = _dof_map(n_el, p)
    size = (n_el - 1) + n_el * (p - 1)
    if size == 0:
        return PiecewisePolynomial(mesh, np.zeros((n_el, p + 1)))
    s, w = legendre.leggauss(2 * p + 4)
    values, derivs = _local_basis(s, p)
    eps2 = problem.epsilon ** 2
    matrix = np.zeros((size, size))
    rhs = np.zeros(size)
    for j in range(n_el):
        a, b = mesh.element(j)
        h = b - a
        x = 0.5 * (a + b) + 0.5 * h * s
        stiff = eps2 * (2.0 / h) * (derivs.T * w) @ derivs
        mass = 0.5 * h * (values.T * (w * problem.b(x))) @ values
        load = 0.5 * h * values.T @ (w * problem.f(x))
        active = np.flatnonzero(dofs[j] >= 0)
        index = dofs[j, active]
        matrix[np.ix_(index, index)] += (stiff + mass)[np.ix_(active, active)]
        rhs[index] += load[active]
    scale = 1.0 / np.sqrt(np.diag(matrix))
    try:
        scaled = scipy.linalg.solve(matrix * np.outer(scale, scale),
                                    scale * rhs, assume_a="pos")
    except (np.linalg.LinAlgError, ValueError) as err:
        raise SolverError(f"Galerkin system of size {size} could not be "
                          f"solved: {err}") from err
    solution = scale * scaled
    coefficients = np.zeros((n_el, p + 1))
    for j in range(n_el):
        local = np.where(dofs[j] >= 0, solution[dofs[j]], 0.0)
        coefficients[j] = _to_chebyshev(local)
    logger.debug("galerkin_solve eps=%.3e p=%d elements=%d dofs=%d",
                 problem.epsilon, p, n_el, size)
    return PiecewisePolynomial(mesh, coefficients)


def _merged_panels(*functions: PiecewisePolynomial) -> np.ndarray:
    nodes = functions[0].mesh.nodes
    for fn in functions[1:]:
        nodes = np.union1d(nodes, fn.mesh.nodes)
    return nodes


def bilinear_form(problem: BvpProblem, u: PiecewisePolynomial,
                  v: PiecewisePolynomial) -> float:
    """int eps^2 u' v' + b u v over the union of both meshes."""
    nodes = _merged_panels(u, v)
    s, w = legendre.leggauss(u.degree + v.degree + 4)
    total = 0.0
    for a, b in zip(nodes[:-1], nodes[1:]):
        x = 0.5 * (a + b) + 0.5 * (b - a) * s
        uv, ud = u.evaluate(x)
        vv, vd = v.evaluate(x)
        integrand = problem.epsilon ** 2 * ud * vd + problem.b(x) * uv * vv
        total += 0.5 * (b - a) * float(w @ integrand)
    return total


def load_functional(problem: BvpProblem, v: PiecewisePolynomial) -> float:
    """int f v over the mesh of v."""
    s, w = legendre.leggauss(2 * v.degree + 4)
    total = 0.0
    for a, b in zip(v.mesh.nodes[:-1], v.mesh.nodes[1:]):
        x = 0.5 * (a + b) + 0.5 * (b - a) * s
        total += 0.5 * (b - a) * float(w @ (problem.f(x) * v(x)))
    return total


def evaluate_pw(v: PiecewisePolynomial,
                x: Any) -> Tuple[np.ndarray, np.ndarray]:
    """
    (values, derivatives) of v at x.

    Raises:
        DomainError: If a point lies outside [-1, 1].
    """
    return v.evaluate(x)


def _reference_mesh(problem: BvpProblem, p: int, kappa: float) -> Mesh:
    """sbl_mesh with three extra elements: one more per layer, and 0."""
    mesh = sbl_mesh(kappa, p, problem.epsilon)
    if mesh.num_elements == 1:
        extra = [-0.5, 0.0, 0.5]
    else:
        width = kappa * p * problem.epsilon
        extra = [-1.0 + 0.1 * width, 0.0, 1.0 - 0.1 * width]
    return Mesh(np.union1d(mesh.nodes, extra))


def hp_reference(problem: BvpProblem, p: int,
                 kappa: float = Config.DEFAULT_KAPPA,
                 extra_degree: int = 4) -> PiecewisePolynomial:
    """
    Surrogate exact solution for problems without a closed form: the
    Galerkin solution of degree p + extra_degree on the spectral
    boundary-layer mesh of degree p refined by three extra elements.
    """
    return galerkin_solve(problem, _reference_mesh(problem, p, kappa),
                          p + extra_degree)


def hp_reference_gap(problem: BvpProblem, p: int,
                     kappa: float = Config.DEFAULT_KAPPA,
                     samples: int = 2001) -> float:
    """
    Estimated error of hp_reference: the sampled maximum distance between
    the degree p + 4 and p + 6 references.
    """
    coarse = hp_reference(problem, p, kappa, 4)
    fine = hp_reference(problem, p, kappa, 6)
    x = np.union1d(np.linspace(-1.0, 1.0, samples), coarse.mesh.nodes)
    return float(np.max(np.abs(coarse(x) - fine(x))))
