#!/usr/bin/env python3
"""
tanh and sigmoid networks for the solution of -eps^2 u'' + b u = f with
constant b.

When kappa p eps >= 1/2 the solution is smooth enough to be emulated by
a single analytic_net. Otherwise it is split as
u = u^S + C+ e^{-(1-x)/eps} + C- e^{-(1+x)/eps}; the smooth part goes
through analytic_net and each layer through boundary_layer_net, and the
three networks are summed.

Functions:
    - solution_recipe: Parameters and branch for (problem, p, kappa, beta).
    - boundary_layer_net: Network for C e^{-(1 -+ x)/eps}.
    - solution_net: Network for the solution.
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np

from api.v1.services.calculus_service import (affine_net, concatenate_chain,
                                              sum_many)
from api.v1.services.cheb_service import analytic_net, poly_net
from api.v1.services.emulation_service import (exp_net, identity_net,
                                               pad_depth)
from api.v1.services.reference_service import (boundary_layer_decomposition,
                                               reference_solution,
                                               unit_reaction_problem)
from config import Config
from models.activation import Activation
from models.cheb_expansion import ChebExpansion
from models.errors import (DomainError, NumericOverflowError,
                           UnsupportedProblemError)
from models.network import Layer, Network
from models.problem import BvpProblem
from models.solution_recipe import Regime, Side, SolutionNetRecipe

logger = logging.getLogger(__name__)

# Below this eps the stretching weights 1/eps are not trusted.
_EPS_MIN = 1e-12
_WALLS = np.array([[-1.0], [1.0]])


def _layer_depth(p: int) -> int:
    """Depth of a boundary-layer net; p = 1 keeps the depth-2 exp net."""
    return max(2, int(math.ceil(math.log2(p))) + 1) if p > 1 else 2


def solution_recipe(problem: BvpProblem, p: int,
                    kappa: Optional[float] = None,
                    beta: Optional[float] = None) -> SolutionNetRecipe:
    """
    Branch, smooth part and layer amplitudes of the solution network.

    The problem is first rewritten with b = 1. In the asymptotic regime
    smooth samples the whole reference solution and c_plus = c_minus = 0.

    Raises:
        UnsupportedProblemError: If b is not constant.
        UnsupportedReferenceError: If f has no closed-form solution.
        DomainError: If p < 1 or kappa, beta are not positive.
    """
    kappa = Config.DEFAULT_KAPPA if kappa is None else kappa
    beta = Config.DEFAULT_BETA if beta is None else beta
    if p < 1:
        raise DomainError(f"Invalid degree: {p}. Must be >= 1")
    if kappa <= 0 or beta <= 0:
        raise DomainError(
            f"Invalid kappa/beta: {kappa}/{beta}. Both must be > 0")
    if not problem.has_constant_b:
        raise UnsupportedProblemError(
            "Solution networks need a constant reaction coefficient")
    unit = unit_reaction_problem(problem)
    regime = Regime.classify(kappa, p, unit.epsilon)
    if regime is Regime.ASYMPTOTIC:
        return SolutionNetRecipe(unit.epsilon, p, kappa, beta, regime,
                                 reference_solution(unit))
    split = boundary_layer_decomposition(unit)
    return SolutionNetRecipe(unit.epsilon, p, kappa, beta, regime,
                             split.smooth, split.c_plus, split.c_minus)


def boundary_layer_net(activation: "Activation | str", epsilon: float,
                       c: float, side: "Side | str", p: int,
                       beta: Optional[float] = None) -> Network:
    """
    Network for c e^{-(1 -+ x)/eps} on (-1, 1).

    The layers are x -> (1 -+ x)/eps + 1 (range [1, 2/eps + 1]), an
    identity net of depth ceil(log2 p) with tau = delta = e^{-beta p} eps
    and M = 2/eps + 1, exp_net(tau) and finally y -> c e y. The identity
    is left out for p <= 2, where it would be a depth-1 affine map.

    Args:
        activation: tanh or sigmoid.
        epsilon (float): Layer width in (0, 1].
        c (float): Amplitude at the wall.
        side: "+" for the layer at x = 1, "-" for x = -1.
        p (int): Degree the depth is matched to.
        beta (float, optional): Tolerance rate, Config.DEFAULT_BETA.

    Raises:
        DomainError: If eps is not in (0, 1] or p < 1.
        NumericOverflowError: If eps < 1e-12.
    """
    activation = Activation.from_str(activation)
    side = side if isinstance(side, Side) else Side.from_str(side)
    beta = Config.DEFAULT_BETA if beta is None else beta
    if not 0.0 < epsilon <= 1.0:
        raise DomainError(f"Invalid epsilon: {epsilon}. Must be in (0, 1]")
    if p < 1:
        raise DomainError(f"Invalid degree: {p}. Must be >= 1")
    if epsilon < _EPS_MIN:
        raise NumericOverflowError(
            f"eps = {epsilon:.3e} is below {_EPS_MIN}: stretching weights "
            f"overflow")
    tau = math.exp(-beta * p) * epsilon
    bound = 2.0 / epsilon + 1.0
    stretch = affine_net([[-side.sign / epsilon]], [1.0 / epsilon + 1.0],
                         activation)
    amplitude = affine_net([[c * math.e]], [0.0], activation)
    parts = [amplitude, exp_net(activation, tau)]
    id_depth = _layer_depth(p) - 1
    if id_depth > 1:
        parts.append(identity_net(activation, id_depth, tau, bound))
    parts.append(stretch)
    net = concatenate_chain(*parts)
    logger.debug("boundary_layer_net %s side=%s eps=%.3e p=%d tau=%.3e "
                 "depth=%d size=%d", activation.name, side.value, epsilon, p,
                 tau, net.depth, net.size)
    return net


def _with_output(net: Network, A: np.ndarray, b: np.ndarray) -> Network:
    return Network(list(net.layers[:-1]) + [Layer(A, b)], net.activation)


def _exact_walls_asymptotic(net: Network, activation: Activation,
                            recipe: SolutionNetRecipe) -> Network:
    """
    Adds c0 + c1 t1(x) through the output layer, t1 being the tree's
    emulation of T_1, so that R(net)(+-1) = 0.
    """
    if net.depth == 1:
        A, b = net.layers[-1]
        values = (_WALLS @ A.T + b)[:, 0]
        shift = np.array([0.5 * (values[0] - values[1]),
                          -0.5 * (values[0] + values[1])])
        return _with_output(net, A + shift[0], b + shift[1])
    t1_net = poly_net(activation, ChebExpansion(np.eye(recipe.p + 1)[1]),
                      recipe.tolerance)
    t1 = t1_net(_WALLS)[:, 0]
    values = net(_WALLS)[:, 0]
    c1, c0 = np.linalg.solve(np.column_stack([t1, np.ones(2)]), -values)
    A, b = net.layers[-1]
    t1_out = t1_net.layers[-1]
    return _with_output(net, A + c1 * t1_out.A, b + c1 * t1_out.b + c0)


def _layer_amplitudes(smooth_net: Network, plus: Network,
                      minus: Network) -> Tuple[float, float]:
    """C+ and C- such that smooth + C+ plus + C- minus vanishes at +-1."""
    system = np.column_stack([plus(_WALLS)[:, 0], minus(_WALLS)[:, 0]])
    c_plus, c_minus = np.linalg.solve(system, -smooth_net(_WALLS)[:, 0])
    return float(c_plus), float(c_minus)


def solution_net(activation: "Activation | str", problem: BvpProblem,
                 p: int, kappa: Optional[float] = None,
                 beta: Optional[float] = None,
                 exact_boundary: bool = False) -> Network:
    """
    Network approximating the solution of problem in W^{1,inf}((-1, 1)).

    Hidden layers depend on (eps, p, beta) only, never on f.

    Args:
        activation: tanh, sigmoid or another C^2 activation (the
            boundary layers need tanh or sigmoid).
        problem (BvpProblem): Constant b; f constant, exponential or
            polynomial.
        p (int): Degree >= 1.
        kappa, beta (float, optional): Config.DEFAULT_KAPPA/BETA.
        exact_boundary (bool): Re-solve the output coefficients from the
            realized values at +-1 so that the network vanishes there.

    Raises:
        UnsupportedProblemError: If b is not constant.
        UnsupportedReferenceError: If f has no closed-form solution.
    """
    activation = Activation.from_str(activation)
    recipe = solution_recipe(problem, p, kappa, beta)
    delta = recipe.tolerance
    smooth = analytic_net(activation, recipe.smooth, p, delta)
    if recipe.regime is Regime.ASYMPTOTIC:
        net = smooth
        if exact_boundary:
            net = _exact_walls_asymptotic(net, activation, recipe)
    else:
        layers = {side: boundary_layer_net(activation, recipe.epsilon, 1.0,
                                           side, p, recipe.beta)
                  for side in Side}
        depth = max(smooth.depth, layers[Side.PLUS].depth)
        smooth = pad_depth(smooth, depth, delta, recipe.range_bound)
        c_plus, c_minus = recipe.c_plus, recipe.c_minus
        if exact_boundary:
            c_plus, c_minus = _layer_amplitudes(smooth, layers[Side.PLUS],
                                                layers[Side.MINUS])
            logger.debug("Boundary amplitudes adjusted by %.3e, %.3e",
                         c_plus - recipe.c_plus, c_minus - recipe.c_minus)
        scaled = [_with_output(layers[side], c * layers[side].layers[-1].A,
                               c * layers[side].layers[-1].b)
                  for side, c in ((Side.PLUS, c_plus),
                                  (Side.MINUS, c_minus))]
        net = sum_many([smooth] + scaled)
    logger.debug("solution_net %s eps=%.3e p=%d regime=%s depth=%d size=%d",
                 activation.name, recipe.epsilon, p, recipe.regime.value,
                 net.depth, net.size)
    return net
