#!/usr/bin/env python3
"""
Closed-form solutions of -eps^2 u'' + b u = f with constant b.

With mu = sqrt(b)/eps the solution is u_p + C+ e^{-mu(1-x)} +
C- e^{-mu(1+x)}, where u_p is a particular solution and C+- solve the
boundary conditions. The two exponentials are the boundary layers at
x = 1 and x = -1; written this way nothing overflows for small eps.

Functions:
    - unit_reaction_problem: Rewrites constant b as b = 1.
    - reference_solution: The closed-form solution.
    - boundary_layer_decomposition: Smooth part and layer amplitudes.
    - smooth_part_sampler: The smooth part only.
"""
import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from models.errors import (DecompositionError, DomainError,
                           UnsupportedProblemError,
                           UnsupportedReferenceError)
from models.problem import BvpProblem, Term, TermKind

logger = logging.getLogger(__name__)

# Wall residual above which the smooth/layer split is rejected.
_WALL_TOL = 1e-6


def unit_reaction_problem(problem: BvpProblem) -> BvpProblem:
    """
    -eps^2 u'' + b u = f with constant b as -(eps^2/b) u'' + u = f/b.

    Raises:
        UnsupportedProblemError: If b is not constant, or eps/sqrt(b)
            exceeds 1.
    """
    if not problem.has_constant_b:
        raise UnsupportedProblemError(
            "Rescaling to b = 1 needs a constant reaction coefficient")
    b = problem.b.constant_value
    if b == 1.0:
        return problem
    try:
        return BvpProblem(problem.epsilon / math.sqrt(b), Term.constant(1.0),
                          problem.f.scaled(1.0 / b))
    except DomainError as err:
        raise UnsupportedProblemError(
            f"eps/sqrt(b) = {problem.epsilon / math.sqrt(b):.6g} is not a "
            f"valid perturbation parameter") from err


def _particular(problem: BvpProblem) -> Callable[[np.ndarray, int],
                                                  np.ndarray]:
    """
    Particular solution u_p as a function (x, order) -> d^order u_p.

    Raises:
        UnsupportedReferenceError: For function sources, or an exponential
            source e^{ax} with b = eps^2 a^2.
    """
    b = problem.b.constant_value
    eps2 = problem.epsilon ** 2
    f = problem.f
    if f.kind in (TermKind.CONSTANT, TermKind.POLYNOMIAL):
        coeffs = (np.array([f.value]) if f.kind is TermKind.CONSTANT
                  else np.array(f.coefficients or (0.0,)))
        # (b - eps^2 D^2)^{-1} = sum_k eps^{2k} D^{2k} / b^{k+1}.
        total = np.zeros_like(coeffs)
        term = coeffs / b
        while np.any(term):
            total[:term.size] += term
            term = eps2 * P.polyder(term, 2) / b
        derivatives = [total, P.polyder(total, 1), P.polyder(total, 2)]
        return lambda x, order: P.polyval(x, derivatives[order]) + 0.0 * x
    if f.kind is TermKind.EXPONENTIAL:
        a = f.rate
        denominator = b - eps2 * a * a
        if denominator == 0.0:
            raise UnsupportedReferenceError(
                f"Resonant exponential source: b = eps^2 a^2 = {b}")
        amplitude = f.scale / denominator
        return lambda x, order: amplitude * a ** order * np.exp(a * x)
    raise UnsupportedReferenceError(
        f"No closed-form particular solution for {f.kind.value} sources")


@dataclass(frozen=True)
class ReferenceSolution:
    """
    u(x) = u_p(x) + c_plus e^{-mu(1-x)} + c_minus e^{-mu(1+x)}.

    Attributes:
        problem (BvpProblem): The solved problem.
        mu (float): sqrt(b)/eps.
        c_plus, c_minus (float): Boundary-layer amplitudes.
        particular (callable): (x, order) -> derivative of u_p.
    """
    problem: BvpProblem
    mu: float
    c_plus: float
    c_minus: float
    particular: Callable[[np.ndarray, int], np.ndarray]

    def layers(self, x: Any, order: int = 0) -> np.ndarray:
        """order-th derivative of the two boundary-layer terms."""
        x = np.asarray(x, dtype=float)
        plus = self.c_plus * self.mu ** order * np.exp(-self.mu * (1.0 - x))
        minus = (self.c_minus * (-self.mu) ** order *
                 np.exp(-self.mu * (1.0 + x)))
        return plus + minus

    def derivative(self, x: Any, order: int = 1) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.particular(x, order) + self.layers(x, order)

    def __call__(self, x: Any) -> np.ndarray:
        return self.derivative(x, 0)

    def evaluate(self, x: Any) -> Tuple[np.ndarray, np.ndarray]:
        return self.derivative(x, 0), self.derivative(x, 1)

    def residual(self, x: Any) -> float:
        """max |-eps^2 u'' + b u - f| at x, relative to max(1, |f|)."""
        x = np.asarray(x, dtype=float)
        p = self.problem
        res = (-p.epsilon ** 2 * self.derivative(x, 2) + p.b(x) * self(x) -
               p.f(x))
        return float(np.max(np.abs(res)) /
                     max(1.0, float(np.max(np.abs(p.f(x))))))


def reference_solution(problem: BvpProblem) -> ReferenceSolution:
    """
    Exact solution for constant b and constant, exponential or polynomial
    f.

    Raises:
        UnsupportedReferenceError: For variable b or other sources.
    """
    if not problem.has_constant_b:
        raise UnsupportedReferenceError(
            "Closed-form references need a constant reaction coefficient")
    particular = _particular(problem)
    mu = math.sqrt(problem.b.constant_value) / problem.epsilon
    q = math.exp(-2.0 * mu)
    right = float(particular(np.array(1.0), 0))
    left = float(particular(np.array(-1.0), 0))
    det = -math.expm1(-4.0 * mu)
    c_plus = (q * left - right) / det
    c_minus = (q * right - left) / det
    logger.debug("reference_solution eps=%.3e C+=%.6g C-=%.6g",
                 problem.epsilon, c_plus, c_minus)
    return ReferenceSolution(problem, mu, c_plus, c_minus, particular)


@dataclass(frozen=True)
class Decomposition:
    """
    u = smooth + c_plus e^{-(1-x)/eps} + c_minus e^{-(1+x)/eps} for b = 1.
    """
    epsilon: float
    smooth: Callable[[np.ndarray], np.ndarray]
    c_plus: float
    c_minus: float


def boundary_layer_decomposition(problem: BvpProblem) -> Decomposition:
    """
    Splits the reference solution of the b = 1 form of problem into its
    smooth part and the two boundary layers.

    Raises:
        UnsupportedProblemError: If b is not constant.
        UnsupportedReferenceError: If no closed form exists.
        DecompositionError: If the solution misses the boundary
            conditions by more than 1e-6.
    """
    unit = unit_reaction_problem(problem)
    reference = reference_solution(unit)
    walls = np.abs(reference(np.array([-1.0, 1.0])))
    if np.max(walls) > _WALL_TOL:
        raise DecompositionError(
            f"Boundary residual {np.max(walls):.3e} exceeds {_WALL_TOL}")
    particular = reference.particular
    return Decomposition(unit.epsilon, lambda x: particular(
        np.asarray(x, dtype=float), 0), reference.c_plus, reference.c_minus)


def smooth_part_sampler(problem: BvpProblem
                        ) -> Callable[[np.ndarray], np.ndarray]:
    """u minus both boundary layers; see boundary_layer_decomposition."""
    return boundary_layer_decomposition(problem).smooth
