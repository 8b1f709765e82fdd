#!/usr/bin/env python3
"""
Error norms between an approximation and a reference solution.

Integrals use the layer-adapted composite rule and are recomputed with
every panel halved; results that disagree by more than
Config.QUADRATURE_RTOL, beyond what evaluation noise and kinks between
panel edges can explain, are flagged. Sup norms are taken over the
quadrature nodes together with layer-clustered sample points.

Functions:
    - error_norms: L2, H1-seminorm, Linf, energy and balanced errors.
    - exp_layer_errors: Errors against e^{-x/eps} on (0, 1).
    - evaluation_noise: Relative rounding noise of layer functions.
    - balanced_norm, energy_norm: Norms from their parts.
"""
import logging
import math
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from api.v1.services.quadrature_service import (QuadratureRule,
                                                layer_adapted_quadrature)
from api.v1.utils.sampling_utils import as_evaluator, layer_clustered_points
from config import Config
from models.problem import BvpProblem

logger = logging.getLogger(__name__)


def balanced_norm(epsilon: float, l2: float, h1_semi: float) -> float:
    """sqrt(eps |w|_1^2 + ||w||^2)."""
    return math.sqrt(epsilon * h1_semi ** 2 + l2 ** 2)


def energy_norm(epsilon: float, weighted_l2_sq: float,
                h1_semi: float) -> float:
    """sqrt(eps^2 |w|_1^2 + int b w^2)."""
    return math.sqrt(epsilon ** 2 * h1_semi ** 2 + weighted_l2_sq)


def _squares(rule: QuadratureRule, weight: np.ndarray, e: np.ndarray,
             de: np.ndarray) -> np.ndarray:
    """(int e^2, int e'^2, int weight e^2) on the rule."""
    return np.array([rule.integrate(e * e), rule.integrate(de * de),
                     rule.integrate(weight * e * e)])


def evaluation_noise(epsilon: float) -> float:
    """
    Relative evaluation noise of layer functions at quadrature nodes.

    Nodes are rounded to about one ulp of 1, which is ulp / eps in the
    stretched layer coordinate.
    """
    return (Config.QUADRATURE_NOISE_ULPS * np.finfo(float).eps
            / min(epsilon, 1.0))


def _agree(coarse: np.ndarray, fine: np.ndarray,
           perturbation: Optional[np.ndarray] = None) -> bool:
    """
    True when the two rules agree to Config.QUADRATURE_RTOL.

    perturbation holds the squared sizes of the parts of the error that no
    panel edge resolves (evaluation noise, kinks off the edges). Either
    rule may misjudge e^2 by about 4 (|e| |d| + d^2), so twice that is
    added to the tolerance.
    """
    size = np.abs(fine)
    tol = Config.QUADRATURE_RTOL * size + Config.RATE_FLOOR ** 2
    if perturbation is not None:
        tol = tol + 8.0 * (np.sqrt(size * perturbation) + perturbation)
    return bool(np.all(np.abs(coarse - fine) <= tol))


def _difference(ev_a: Callable, ev_r: Callable) -> Callable:
    def evaluate(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        va, da = ev_a(x)
        vr, dr = ev_r(x)
        return va - vr, da - dr
    return evaluate


def _resolution_check(approx: Callable, reference: Callable,
                      surrogate: Optional[Callable], weight: Callable,
                      rule: QuadratureRule, noise: float
                      ) -> Tuple[np.ndarray, np.ndarray]:
    """
    Error integrals on rule together with the squared perturbation sizes.

    The perturbation is noise times the reference plus, when given, the
    deviation of approx from a surrogate whose kinks are panel edges.
    """
    x = rule.nodes
    w = weight(x)
    va, da = approx(x)
    vr, dr = reference(x)
    integrals = _squares(rule, w, va - vr, da - dr)
    size = noise * np.sqrt(np.maximum(_squares(rule, w, vr, dr), 0.0))
    if surrogate is not None:
        vs, ds = surrogate(x)
        size = size + np.sqrt(np.maximum(
            _squares(rule, w, va - vs, da - ds), 0.0))
    return integrals, size * size


def error_norms(approx: Any, reference: Any, problem: BvpProblem,
                breakpoints: Optional[Sequence[float]] = None,
                samples: Optional[int] = None,
                check: bool = True,
                surrogate: Any = None,
                noise: Optional[float] = None) -> Dict[str, Any]:
    """
    Errors of approx against reference on (-1, 1).

    Args:
        approx: Network, PiecewisePolynomial or anything with
            evaluate(x) -> (values, derivatives).
        reference: Same, typically a ReferenceSolution.
        problem (BvpProblem): Supplies eps and b.
        breakpoints: Kinks of approx (mesh nodes) to align panels with.
        samples (int, optional): Extra sup-norm points, default
            Config.LINF_SAMPLES.
        check (bool): Recompute integrals on halved panels.
        surrogate: A function close to approx whose kinks are all in
            breakpoints, e.g. the piecewise polynomial a ReLU network
            emulates. The deviation widens the check's tolerance.
        noise (float, optional): Relative pointwise noise of approx and
            reference; defaults to Config.QUADRATURE_NOISE_ULPS ulps
            divided by eps.

    Returns:
        dict: l2, h1_semi, linf, energy, balanced, w1inf and flagged.
    """
    eps = problem.epsilon
    ev_a, ev_r = as_evaluator(approx), as_evaluator(reference)
    evaluate = _difference(ev_a, ev_r)
    rule = layer_adapted_quadrature(eps, breakpoints)
    e, de = evaluate(rule.nodes)
    integrals = _squares(rule, problem.b(rule.nodes), e, de)
    flagged = False
    if check:
        fine, perturbation = _resolution_check(
            ev_a, ev_r, None if surrogate is None else as_evaluator(surrogate),
            problem.b, layer_adapted_quadrature(eps, breakpoints, refine=2),
            evaluation_noise(eps) if noise is None else noise)
        flagged = not _agree(integrals, fine, perturbation)
        if flagged:
            logger.warning("Quadrature disagreement at eps=%.3e: %s vs %s",
                           eps, integrals.tolist(), fine.tolist())
    l2_sq, h1_sq, weighted_sq = np.maximum(integrals, 0.0)
    l2, h1_semi = math.sqrt(l2_sq), math.sqrt(h1_sq)
    x = np.union1d(rule.nodes, layer_clustered_points(eps, samples))
    e, de = evaluate(x)
    linf = float(np.max(np.abs(e)))
    return {"l2": l2, "h1_semi": h1_semi, "linf": linf,
            "energy": energy_norm(eps, weighted_sq, h1_semi),
            "balanced": balanced_norm(eps, l2, h1_semi),
            "w1inf": max(linf, float(np.max(np.abs(de)))),
            "flagged": flagged}


def exp_layer_errors(approx: Any, epsilon: float,
                     samples: Optional[int] = None,
                     check: bool = True,
                     breakpoints: Optional[Sequence[float]] = None,
                     surrogate: Any = None) -> Dict[str, Any]:
    """
    Errors of approx against e^{-x/eps} on (0, 1).

    The rule for (-1, 1) with layer width 2 eps is mapped by
    x = (y + 1)/2. weighted_h1 is eps^{1/2} |e|_{H1(0,1)}; balanced and
    energy use b = 1. breakpoints (in x) and surrogate work as in
    error_norms.
    """
    def target(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        value = np.exp(-x / epsilon)
        return value, -value / epsilon

    def mapped(evaluator: Optional[Callable]) -> Optional[Callable]:
        if evaluator is None:
            return None
        return lambda y: evaluator(0.5 * (y + 1.0))

    ev_a = as_evaluator(approx)
    evaluate = _difference(ev_a, target)
    layer = min(2.0 * epsilon, 1.0)
    edges = (None if breakpoints is None
             else 2.0 * np.asarray(breakpoints, dtype=float) - 1.0)

    def half_rule(refine: int) -> QuadratureRule:
        rule = layer_adapted_quadrature(layer, edges, refine=refine)
        return QuadratureRule(rule.nodes, 0.5 * rule.weights, rule.edges,
                              rule.order)

    rule = half_rule(1)
    e, de = evaluate(0.5 * (rule.nodes + 1.0))
    coarse = _squares(rule, np.ones_like(e), e, de)[:2]
    flagged = False
    if check:
        fine, perturbation = _resolution_check(
            mapped(ev_a), mapped(target),
            mapped(None if surrogate is None else as_evaluator(surrogate)),
            np.ones_like, half_rule(2), evaluation_noise(epsilon))
        flagged = not _agree(coarse, fine[:2], perturbation[:2])
        if flagged:
            logger.warning("Quadrature disagreement for the eps=%.3e layer",
                           epsilon)
    l2, h1_semi = np.sqrt(np.maximum(coarse, 0.0))
    y = layer_clustered_points(layer, samples)
    e, de = evaluate(0.5 * (y + 1.0))
    linf = float(np.max(np.abs(e)))
    return {"l2": float(l2), "h1_semi": float(h1_semi), "linf": linf,
            "energy": energy_norm(epsilon, float(l2) ** 2, float(h1_semi)),
            "balanced": balanced_norm(epsilon, float(l2), float(h1_semi)),
            "w1inf": max(linf, float(np.max(np.abs(de)))),
            "weighted_h1": math.sqrt(epsilon) * float(h1_semi),
            "flagged": bool(flagged)}
