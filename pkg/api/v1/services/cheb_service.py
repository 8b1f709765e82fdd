#!/usr/bin/env python3
"""
Chebyshev emulation networks.

A binary tree of product networks emulates T_1, ..., T_m simultaneously
using T_{a+b} = 2 T_a T_b - T_{|a-b|}: each level doubles the highest
degree available, so the depth grows like log2(m). Polynomial networks
attach an output layer with Chebyshev coefficients to such a tree, and
analytic functions are emulated through their Clenshaw-Curtis
interpolants.

Functions:
    - cheb_tree_net: Network with outputs approximating T_1..T_m.
    - clenshaw_curtis_nodes: cos(j pi / p), j = 0..p.
    - cheb_coeffs: Interpolating Chebyshev coefficients from samples.
    - poly_net: Network approximating a Chebyshev expansion.
    - analytic_net: poly_net of the Clenshaw-Curtis interpolant of f.
    - tree_errors: Sampled W^{1,inf} errors of a tree's outputs.
    - verify_cheb_trees: Error, depth and size checks over (m, delta).
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List

import numpy as np
from numpy.polynomial import chebyshev as C

from api.v1.services.calculus_service import (affine_net, concatenate_chain,
                                              full_parallelize_many,
                                              scale_output)
from api.v1.services.emulation_service import (identity_net, product_floor,
                                               product_net)
from models.activation import Activation
from models.cheb_expansion import ChebExpansion
from models.errors import DomainError, InputShapeError
from models.network import Network

logger = logging.getLogger(__name__)

# Range bound of the identity and product subnets inside the tree; level
# inputs stay within delta / 8 of [-1, 1].
_TREE_BOUND = 1.125


@dataclass(frozen=True)
class ChebTreeNet:
    """
    A Chebyshev tree network and how it was built.

    Attributes:
        m (int): Number of outputs (T_1..T_m).
        delta (float): Requested W^{1,inf} tolerance per output.
        net (Network): The network, m outputs.
        thetas (list): Subnet tolerances per level, top level first,
            ending with the base.
    """
    m: int
    delta: float
    net: Network
    thetas: List[float] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return self.net.depth

    @property
    def size(self) -> int:
        return self.net.size


def _ceil_pow2(m: int) -> int:
    return 1 << (m - 1).bit_length()


def _tolerance_schedule(m: int, delta: float) -> List[float]:
    """
    Product and identity tolerances per level, top level first, then the
    base.

    If a level reads T_1..T_h with value error v and derivative error d
    and its subnets are within theta in W^{1,inf}, its outputs are within
    5 v + 3 theta in value and 5 d + 5 h^2 (v + theta) in derivative,
    since |T_k'| <= k^2 and odd k also subtract T_1. Working down from
    (delta, delta), every level takes theta = v = min(V / 8, D / (30 h^2))
    and d = D / 8. The base 2 Pi(x, x) - 1 needs 2 theta <= V and
    4 theta <= D.
    """
    thetas = []
    value, slope = delta, delta
    half = _ceil_pow2(m) // 2
    while half >= 2:
        theta = min(value / 8.0, slope / (30.0 * half * half))
        thetas.append(theta)
        value, slope = theta, slope / 8.0
        half //= 2
    thetas.append(min(value / 2.0, slope / 4.0))
    return thetas


def _attainable(activation: Activation, theta: float, bound: float) -> float:
    floor = product_floor(activation, bound)
    if theta < floor:
        logger.info("%s tree tolerance %.3e is below the float64 product "
                    "floor %.3e on [-%g, %g]; using the floor",
                    activation.name, theta, floor, bound, bound)
        return floor
    return theta


def _base_tree(activation: Activation, theta: float) -> Network:
    """Outputs (Id(x), 2 Pi(x, x) - 1) approximating (T_1, T_2)."""
    product = product_net(activation, theta, 1.0)
    identity = identity_net(activation, product.depth, theta, 1.0)
    return concatenate_chain(
        affine_net(np.diag([1.0, 2.0]), [0.0, -1.0], activation),
        full_parallelize_many([identity, product]),
        affine_net(np.ones((3, 1)), np.zeros(3), activation))


def _level_matrices(m: int) -> tuple:
    """
    Wiring of the level that maps (T_1..T_{m~/2}) to (T_1..T_m).

    Row i > m~/2 of the input map feeds a product input with
    T_{m~/4 + ceil((i - 1 - m~/2) / 4)} (1-based); pairs of rows give
    the factors T_{floor(k/2)} and T_{ceil(k/2)} of T_k. The output map
    keeps T_k for k <= m~/2 and forms 2 Pi - 1 (even k) or
    2 Pi - T_1 (odd k) above.
    """
    half = _ceil_pow2(m) // 2
    rows = 2 * m - half
    a1 = np.zeros((rows, half))
    for i in range(1, rows + 1):
        if i <= half:
            a1[i - 1, i - 1] = 1.0
        else:
            j = half // 2 + math.ceil((i - 1 - half) / 4)
            a1[i - 1, j - 1] = 1.0
    a2 = np.zeros((m, m))
    b2 = np.zeros(m)
    for i in range(1, m + 1):
        if i <= half:
            a2[i - 1, i - 1] = 1.0
        else:
            a2[i - 1, i - 1] = 2.0
            if i % 2:
                a2[i - 1, 0] = -1.0
            else:
                b2[i - 1] = -1.0
    return a1, a2, b2


def _tree(activation: Activation, m: int, thetas: List[float]) -> Network:
    if m == 2:
        return _base_tree(activation, thetas[0])
    half = _ceil_pow2(m) // 2
    lower = _tree(activation, half, thetas[1:])
    product = product_net(activation, thetas[0], _TREE_BOUND)
    identity = identity_net(activation, product.depth, thetas[0],
                            _TREE_BOUND, dim=half)
    a1, a2, b2 = _level_matrices(m)
    middle = full_parallelize_many([identity] + [product] * (m - half))
    return concatenate_chain(affine_net(a2, b2, activation), middle,
                             affine_net(a1, np.zeros(a1.shape[0]),
                                        activation),
                             lower)


def cheb_tree_net(activation: "Activation | str", m: int,
                  delta: float) -> ChebTreeNet:
    """
    Network whose k-th output approximates T_k on (-1, 1), k = 1..m.

    For m = 2 the tree is (Id(x), 2 Pi(x, x) - 1). For m > 2, with m~
    the least power of two >= m, the level maps the outputs of the tree
    for m~/2 through parallel identities and products with range bound
    1.125. Subnet tolerances follow _tolerance_schedule, raised where needed
    to product_floor so that smooth subnets stay constructible; the
    sampled accuracy of the result is what tree_errors reports. Depth is
    ceil(log2 m) + 1 for depth-2 subnets.

    Args:
        activation: Activation admitting identity and product networks.
        m (int): Highest degree, >= 2.
        delta (float): Tolerance in (0, 1).

    Raises:
        DomainError: If m < 2 or delta is not in (0, 1).
    """
    activation = Activation.from_str(activation)
    if m < 2:
        raise DomainError(
            f"Invalid degree: {m}. Must be >= 2 (T_1 is affine)")
    if not 0.0 < delta < 1.0:
        raise DomainError(f"Invalid tolerance: {delta}. Must be in (0, 1)")
    schedule = _tolerance_schedule(m, delta)
    bounds = [_TREE_BOUND] * (len(schedule) - 1) + [1.0]
    thetas = [_attainable(activation, theta, bound)
              for theta, bound in zip(schedule, bounds)]
    net = _tree(activation, m, thetas)
    logger.debug("cheb_tree_net %s m=%d delta=%.3e depth=%d size=%d",
                 activation.name, m, delta, net.depth, net.size)
    return ChebTreeNet(m, delta, net, thetas)


def clenshaw_curtis_nodes(p: int) -> np.ndarray:
    """cos(j pi / p) for j = 0..p (descending from 1 to -1)."""
    if p == 0:
        return np.array([1.0])
    return np.cos(np.pi * np.arange(p + 1) / p)


def cheb_coeffs(samples: Any, p: int) -> ChebExpansion:
    """
    Chebyshev coefficients of the degree-p interpolant through samples
    taken at the Clenshaw-Curtis nodes cos(j pi / p).

    Uses the direct cosine sums
    v_k = (2/p) sum''_j f_j cos(j k pi / p), with halved end terms and
    v_0, v_p halved.

    Args:
        samples: p + 1 values at clenshaw_curtis_nodes(p).
        p (int): Degree >= 0.

    Raises:
        InputShapeError: If len(samples) != p + 1.
    """
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size != p + 1:
        raise InputShapeError(
            f"Expected {p + 1} samples for degree {p}, got {samples.size}")
    if p == 0:
        return ChebExpansion(samples.copy())
    j = np.arange(p + 1)
    weights = np.ones(p + 1)
    weights[0] = weights[-1] = 0.5
    cosines = np.cos(np.pi * np.outer(j, j) / p)
    coefficients = (2.0 / p) * cosines @ (weights * samples)
    coefficients[0] *= 0.5
    coefficients[-1] *= 0.5
    return ChebExpansion(coefficients)


def poly_net(activation: "Activation | str", expansion: ChebExpansion,
             delta: float) -> Network:
    """
    Network approximating v = sum_k v_k T_k within delta sum_{k>=1} |v_k|
    in W^{1,inf}((-1, 1)).

    Degree 0 and 1 give exact depth-1 affine nets. Otherwise the output
    layer ((v_1..v_p), v_0) is attached to cheb_tree_net(p, delta), so
    the hidden layers depend only on (p, delta).
    """
    activation = Activation.from_str(activation)
    v = expansion.coefficients
    if expansion.degree <= 1:
        slope = v[1] if expansion.degree == 1 else 0.0
        return affine_net([[slope]], [v[0]], activation)
    tree = cheb_tree_net(activation, expansion.degree, delta)
    return scale_output(tree.net, v[None, 1:], [v[0]])


def analytic_net(activation: "Activation | str",
                 f: Callable[[np.ndarray], np.ndarray], p: int,
                 delta: float) -> Network:
    """
    poly_net of the degree-p Clenshaw-Curtis interpolant of f.

    Args:
        activation: Hidden-layer activation.
        f: Vectorized function on [-1, 1].
        p (int): Interpolation degree >= 0.
        delta (float): Tree tolerance in (0, 1).
    """
    nodes = clenshaw_curtis_nodes(p)
    expansion = cheb_coeffs(np.asarray(f(nodes), dtype=float), p)
    return poly_net(activation, expansion, delta)


def tree_errors(tree: ChebTreeNet, samples: int = 10000) -> np.ndarray:
    """
    max(sup |T_k - out_k|, sup |T_k' - out_k'|) for k = 1..m, sampled at
    Chebyshev-clustered points of [-1, 1].
    """
    x = np.cos(np.linspace(0.0, np.pi, samples))
    result = tree.net.realize(x.reshape(-1, 1))
    errors = np.empty(tree.m)
    for k in range(1, tree.m + 1):
        basis = np.eye(k + 1)[k]
        value_err = np.abs(result.value[:, k - 1] - C.chebval(x, basis))
        deriv_err = np.abs(result.jacobian[:, k - 1, 0] -
                           C.chebval(x, C.chebder(basis)))
        errors[k - 1] = max(value_err.max(), deriv_err.max())
    return errors


def verify_cheb_trees(activation: "Activation | str", ms: Iterable[int],
                      deltas: Iterable[float],
                      samples: int = 10000) -> List[Dict[str, Any]]:
    """
    Builds cheb_tree_net for every (m, delta) and reports its sampled
    error, depth and size.

    Returns:
        list: One dict per tree with m, delta, depth, expected_depth,
        size, size_per_m, max_error and passed (error <= delta and exact
        depth).
    """
    rows = []
    for m in ms:
        for delta in deltas:
            tree = cheb_tree_net(activation, m, delta)
            max_error = float(tree_errors(tree, samples).max())
            expected = int(math.ceil(math.log2(m))) + 1
            rows.append({"m": m, "delta": delta, "depth": tree.depth,
                         "expected_depth": expected, "size": tree.size,
                         "size_per_m": tree.size / m,
                         "max_error": max_error,
                         "passed": bool(max_error <= delta and
                                        tree.depth == expected)})
            logger.info("cheb tree m=%d delta=%.1e error=%.3e depth=%d "
                        "size=%d", m, delta, max_error, tree.depth,
                        tree.size)
    return rows
