#!/usr/bin/env python3
"""
Closed-form emulation networks: identity, square, product and exponential
maps realized by strict networks with a fixed activation.

Smooth activations (tanh, sigmoid, custom C^2 functions) use depth-2
constructions built around an anchor point of the activation and a
half-width around it on which the activation is almost affine (identity)
or almost quadratic (square). ReLU uses exact identities and sawtooth
square approximations whose depth grows with log(1/tolerance).

Functions:
    - identity_anchor, square_anchor: Anchor points of an activation.
    - identity_net: W^{1,inf}-approximate identity of any depth.
    - square_net: Approximation of x -> x^2 on [-M, M].
    - product_net: Approximation of (x1, x2) -> x1 x2 on [-M, M]^2.
    - square_floor, product_floor: Smallest tolerances reachable in
      float64.
    - exp_net: The two-neuron tanh/sigmoid emulation of exp(-x) on x >= 0.
    - pad_depth: Extends a network by an identity of matching depth.
    - relu_identity_net, relu_square_net, relu_product_net: ReLU variants.
"""
import logging
import math
from functools import lru_cache
from typing import Tuple

import numpy as np

from api.v1.services.calculus_service import (affine_net, concatenate,
                                              concatenate_chain,
                                              full_parallelize_many)
from models.activation import Activation, ActivationKind
from models.errors import (CalculusError, ConstructionError, DomainError,
                           NumericOverflowError)
from models.network import Network

logger = logging.getLogger(__name__)

_EPS = float(np.finfo(float).eps)
_SAMPLES = 1001
_CANDIDATES = 101
_SCAN_RANGE = 4.0
_DEVIATION_FLOOR = 4.0 * _EPS
_CHECK_SAMPLES = 2001
_STENCIL_MAX = 12
_SPREADS = np.geomspace(1e-3, 2.0, 34)


# Anchors


def _candidates(activation: Activation) -> np.ndarray:
    lo, hi = activation.domain
    lo = max(lo, -_SCAN_RANGE)
    hi = min(hi, _SCAN_RANGE)
    return np.linspace(lo, hi, _CANDIDATES + 2)[1:-1]


def identity_anchor(activation: "Activation | str") -> float:
    """
    Point t0 with activation'(t0) != 0 used by identity nets.

    tanh and sigmoid use t0 = 0, where |activation'| is largest. Custom
    activations take the candidate with the largest |activation'| among
    101 points of the domain (clipped to [-4, 4]).

    Raises:
        ConstructionError: If activation' vanishes at every candidate.
    """
    activation = Activation.from_str(activation)
    if activation.kind in (ActivationKind.TANH, ActivationKind.SIGMOID):
        return 0.0
    t = _candidates(activation)
    values = np.abs(activation.d1(t))
    index = int(np.argmax(values))
    if not values[index] > 0:
        raise ConstructionError(
            f"Activation {activation.name} has no point with nonzero "
            f"first derivative among {_CANDIDATES} candidates")
    return float(t[index])


def square_anchor(activation: "Activation | str") -> float:
    """
    Point t1 with activation''(t1) != 0 used by square nets.

    tanh'' is extremal at atanh(1/sqrt(3)) and sigmoid'' at twice that
    value; custom activations are scanned like identity_anchor.

    Raises:
        ConstructionError: If activation'' is unavailable or vanishes at
            every candidate (e.g. piecewise linear activations).
    """
    activation = Activation.from_str(activation)
    if activation.kind is ActivationKind.TANH:
        return math.atanh(1.0 / math.sqrt(3.0))
    if activation.kind is ActivationKind.SIGMOID:
        return 2.0 * math.atanh(1.0 / math.sqrt(3.0))
    if activation.d2 is None:
        raise ConstructionError(
            f"Activation {activation.name} has no second derivative")
    t = _candidates(activation)
    values = np.abs(activation.d2(t))
    index = int(np.argmax(values))
    if not values[index] > 0:
        raise ConstructionError(
            f"Activation {activation.name} has no point with nonzero "
            f"second derivative among {_CANDIDATES} candidates")
    return float(t[index])


def _at(fn, t: float) -> float:
    # Same array shape as a single-point realization so rounding matches.
    return float(fn(np.full((1, 1), t))[0, 0])


def _residual_at(activation: Activation, t: float) -> float:
    _, residual = activation.centered(np.full((1, 1), t))
    return float(np.asarray(residual)[0, 0])


@lru_cache(maxsize=None)
def _half_width(activation: Activation, order: int, t0: float,
                target: float) -> Tuple[float, float]:
    """
    Half-width delta around t0 on which the order-th derivative of the
    activation stays within relative deviation target of its value at t0.

    delta starts at 1 (or half the distance to the domain boundary) and is
    halved while the sampled deviation exceeds target. The rounding of the
    resulting weights grows like eps / delta**order times the residual of
    the activation at t0, so halving can stop paying off before target is
    met.

    Returns:
        tuple: (delta, sampled deviation at delta).

    Raises:
        ConstructionError: If the float64 floor lies above target.
    """
    g = activation.d1 if order == 1 else activation.d2
    g0 = _at(g, t0)
    # identity biases cancel the exact offset, square biases do not
    level = (_residual_at(activation, t0) if order == 1
             else _at(activation.fn, t0))
    noise_coeff = order * abs(level) / abs(g0)
    lo, hi = activation.domain
    delta = min(1.0, 0.5 * (t0 - lo), 0.5 * (hi - t0))
    target = max(target, _DEVIATION_FLOOR)

    def deviation(d: float) -> float:
        t = np.linspace(t0 - d, t0 + d, _SAMPLES)
        return float(np.max(np.abs(1.0 - g(t) / g0)))

    def noise(d: float) -> float:
        return noise_coeff * _EPS / d ** order

    dev = deviation(delta)
    while dev > target:
        half = 0.5 * delta
        half_dev = deviation(half) if half >= 1e-300 else math.inf
        if half_dev + noise(half) >= dev + noise(delta):
            if dev + noise(delta) <= 2.0 * _DEVIATION_FLOOR:
                # rounding level of the sampled deviation itself
                break
            raise ConstructionError(
                f"{activation.name}: relative deviation {target:.3e} is "
                f"below the float64 floor {dev + noise(delta):.3e} at "
                f"t0={t0:.6f} (half-width {delta:.3e})")
        delta, dev = half, half_dev
    logger.debug("%s order-%d anchor %.6f: half-width %.3e, deviation %.3e",
                 activation.name, order, t0, delta, dev)
    return delta, dev


def _check_finite(*values: float) -> None:
    if not all(math.isfinite(v) for v in values):
        raise NumericOverflowError(
            f"Construction produced non-finite scale factors {values}")


# Identity


def relu_identity_net(depth: int, dim: int = 1) -> Network:
    """
    Exact ReLU identity on R^dim of the given depth.

    Each coordinate is carried by the pair (ReLU(x), ReLU(-x)); hidden
    layers map the pair through [[1, -1], [-1, 1]], whose row sums vanish.
    """
    if depth < 1:
        raise DomainError(f"Invalid depth: {depth}. Must be >= 1")
    if depth == 1:
        return affine_net(np.eye(dim), np.zeros(dim), "relu")
    split = np.kron(np.eye(dim), np.array([[1.0], [-1.0]]))
    carry = np.kron(np.eye(dim), np.array([[1.0, -1.0], [-1.0, 1.0]]))
    merge = np.kron(np.eye(dim), np.array([[1.0, -1.0]]))
    layers = [(split, np.zeros(2 * dim))]
    layers += [(carry, np.zeros(2 * dim))] * (depth - 2)
    layers.append((merge, np.zeros(dim)))
    return Network(layers, "relu")


def _identity_depth2(activation: Activation, tau: float,
                     bound: float) -> Network:
    t0 = identity_anchor(activation)
    delta, _ = _half_width(activation, 1, t0, tau / bound)
    a1 = delta / bound
    a2 = bound / (delta * _at(activation.d1, t0))
    _check_finite(a1, a2)
    h0 = _at(activation.fn, t0)
    return Network([([[a1]], [t0]), ([[a2]], [-(a2 * h0)])], activation)


def identity_net(activation: "Activation | str", depth: int, tau: float,
                 bound: float, dim: int = 1) -> Network:
    """
    Network whose realization is within tau of the identity in
    W^{1,inf}((-bound, bound)^dim).

    Depth 1 is the exact affine identity. Depth 2 is
    ((delta/M, t0), (M/(delta a'(t0)), -M a(t0)/(delta a'(t0)))), which
    maps 0 to 0 exactly. Deeper nets compose a depth-2 identity with
    tolerance tau/3 on (-(M + tau/3), M + tau/3) after a depth L-1
    identity with tolerance tau/3. ReLU identities are exact.

    Args:
        activation: Hidden-layer activation.
        depth (int): Depth L >= 1.
        tau (float): Tolerance > 0.
        bound (float): Range bound M >= 1.
        dim (int): Number of coordinates, handled in parallel.

    Raises:
        DomainError: On invalid depth, tolerance or bound.
        ConstructionError: If the activation has no usable anchor.
        NumericOverflowError: If a scale factor overflows.
    """
    activation = Activation.from_str(activation)
    if depth < 1:
        raise DomainError(f"Invalid depth: {depth}. Must be >= 1")
    if not tau > 0:
        raise DomainError(f"Invalid tolerance: {tau}. Must be > 0")
    if not bound >= 1:
        raise DomainError(f"Invalid range bound: {bound}. Must be >= 1")
    if activation.is_relu:
        return relu_identity_net(depth, dim)
    if depth == 1:
        return affine_net(np.eye(dim), np.zeros(dim), activation)
    if depth == 2:
        single = _identity_depth2(activation, tau, bound)
    else:
        outer = _identity_depth2(activation, tau / 3.0, bound + tau / 3.0)
        inner = identity_net(activation, depth - 1, tau / 3.0, bound)
        single = concatenate(outer, inner)
    if dim == 1:
        return single
    return full_parallelize_many([single] * dim)


def pad_depth(net: Network, depth: int, tau: float = 1e-8,
              bound: float = 1.0) -> Network:
    """
    Extends net to the requested depth by post-composing an identity net.

    Args:
        net: Network to extend.
        depth (int): Target depth >= net.depth.
        tau (float): Identity tolerance (ignored for ReLU).
        bound (float): Range bound of the network outputs.

    Raises:
        CalculusError: If net is already deeper than depth.
    """
    if net.depth == depth:
        return net
    if net.depth > depth:
        raise CalculusError(
            f"Cannot pad a depth-{net.depth} network to depth {depth}")
    identity = identity_net(net.activation, depth - net.depth + 1, tau,
                            max(bound, 1.0), dim=net.output_dim)
    return concatenate(identity, net)


# Square and product (smooth activations)


def _square_error(net: Network, bound: float) -> float:
    x = np.linspace(-bound, bound, _CHECK_SAMPLES)
    values, slopes = net.scalar(x)
    return float(max(np.max(np.abs(values - x * x)),
                     np.max(np.abs(slopes - 2.0 * x))))


def _antiderivative_square(activation: Activation, tau: float,
                           bound: float) -> Network:
    t1 = square_anchor(activation)
    # Identity of activation' with W^{1,inf} tolerance tau/(4M).
    delta1, _ = _half_width(activation, 2, t1, tau / (4.0 * bound ** 2))
    a1 = delta1 / bound
    a2 = bound / (delta1 * _at(activation.d2, t1))
    b2 = -a2 * _at(activation.d1, t1)
    c1 = 2.0 * a2 / a1
    _check_finite(a1, a2, b2, c1)

    rows, biases, weights = [[a1]], [t1], [c1]
    if b2 != 0.0:
        # The linear term 2 b2 x is emulated by an activation identity.
        t0 = identity_anchor(activation)
        delta0, _ = _half_width(activation, 1, t0,
                                tau / (4.0 * bound ** 2 * abs(b2)))
        e1 = delta0 / bound
        e2 = bound / (delta0 * _at(activation.d1, t0))
        c0 = 2.0 * b2 * e2
        _check_finite(e1, e2, c0)
        rows.append([e1])
        biases.append(t0)
        weights.append(c0)
    hidden = activation.fn(np.array(biases, dtype=float).reshape(-1, 1))[:, 0]
    bias = 0.0
    for weight, value in zip(weights, hidden):
        bias += weight * value
    return Network([(rows, biases), ([weights], [-bias])], activation)


def _stencil_weights(k: int) -> np.ndarray:
    """
    gamma_1..gamma_k of the central second difference of order 2k:
    sum over 0 < |j| <= k of gamma_|j| (g(j h) - g(0)) equals
    h^2 g''(0) + O(h^(2k+2)).
    """
    return np.array([2.0 * (-1) ** (j + 1) * math.factorial(k) ** 2 /
                     (j * j * math.factorial(k - j) * math.factorial(k + j))
                     for j in range(1, k + 1)])


def _stencil_square(activation: Activation, t1: float, k: int,
                    spread: float, bound: float) -> Network:
    """
    2k neurons a(t1 +- j h x), j = 1..k, with h = spread / (k M),
    combined by the second-difference weights and scaled by
    1 / (h^2 a''(t1)). Odd Taylor terms cancel pairwise, so no linear
    correction is needed.
    """
    h = spread / (k * bound)
    scale = 1.0 / (h * h * _at(activation.d2, t1))
    _check_finite(h, scale)
    steps = np.repeat(np.arange(1, k + 1) * h, 2) * np.tile([1.0, -1.0], k)
    weights = np.repeat(_stencil_weights(k) * scale, 2)
    biases = np.full(2 * k, t1)
    hidden = activation.fn(biases.reshape(-1, 1))[:, 0]
    return Network([(steps[:, None], biases),
                    ([weights], [-float(weights @ hidden)])], activation)


@lru_cache(maxsize=None)
def _stencil_search(activation: Activation,
                    bound: float) -> Tuple[Tuple[int, float, float], ...]:
    """(k, spread, sampled W^{1,inf} error) of the best spread for each k."""
    t1 = square_anchor(activation)
    lo, hi = activation.domain
    spreads = _SPREADS[_SPREADS < 0.5 * min(t1 - lo, hi - t1)]
    found = []
    for k in range(1, _STENCIL_MAX + 1):
        trials = []
        for spread in spreads:
            try:
                net = _stencil_square(activation, t1, k, float(spread), bound)
            except NumericOverflowError:
                continue
            trials.append((_square_error(net, bound), float(spread)))
        if trials:
            error, spread = min(trials)
            found.append((k, spread, error))
    logger.debug("%s stencil squares on [-%g, %g]: %s", activation.name,
                 bound, bound, found)
    return tuple(found)


def square_floor(activation: "Activation | str", bound: float) -> float:
    """
    Smallest sampled W^{1,inf} error on [-bound, bound] that a depth-2
    square net of this activation reaches in float64 (0 for ReLU).

    Raises:
        ConstructionError: If the activation has no square anchor.
    """
    activation = Activation.from_str(activation)
    if activation.is_relu:
        return 0.0
    found = _stencil_search(activation, float(bound))
    if not found:
        raise ConstructionError(
            f"No finite square net for {activation.name} on "
            f"[-{bound:g}, {bound:g}]")
    return min(error for _, _, error in found)


def product_floor(activation: "Activation | str", bound: float) -> float:
    """Smallest tolerance product_net accepts: six square floors."""
    return 6.0 * square_floor(activation, bound)


def _smooth_square(activation: Activation, tau: float,
                   bound: float) -> Network:
    try:
        net = _antiderivative_square(activation, tau, bound)
    except ConstructionError as err:
        logger.debug("Antiderivative square unavailable: %s", err)
    else:
        if _square_error(net, bound) <= tau:
            return net
    bound = float(bound)
    for k, spread, error in _stencil_search(activation, bound):
        # tau may be a floor that went through tau / 6
        if error <= tau * (1.0 + 4.0 * _EPS):
            logger.debug("%s square tau=%.3e M=%g: %d-pair stencil, "
                         "spread %.3e, error %.3e", activation.name, tau,
                         bound, k, spread, error)
            return _stencil_square(activation, square_anchor(activation), k,
                                   spread, bound)
    raise ConstructionError(
        f"No depth-2 {activation.name} square net reaches {tau:.3e} on "
        f"[-{bound:g}, {bound:g}]; the float64 floor is "
        f"{square_floor(activation, bound):.3e}")


def _polarize(square: Network) -> Network:
    """2 f((x1+x2)/2) - 2 f(x1/2) - 2 f(x2/2) for a square net f."""
    halves = np.array([[0.5, 0.5], [0.5, 0.0], [0.0, 0.5]])
    return concatenate_chain(
        affine_net([[2.0, -2.0, -2.0]], [0.0], square.activation),
        full_parallelize_many([square] * 3),
        affine_net(halves, np.zeros(3), square.activation))


# Square and product (ReLU)


def _sawtooth_levels(tau: float, bound: float) -> int:
    return max(1, int(math.ceil(math.log2(2.0 * bound / tau))))


def _sawtooth_blocks(rows: np.ndarray, bound: float, levels: int,
                     combine: np.ndarray) -> Network:
    """
    ReLU network for combine @ (S(|r_k x| / (2 bound)))_k.

    S is the piecewise linear interpolant of t^2 on 2**levels uniform
    pieces of [0, 1]: S = f_m with f_0(t) = t and
    f_j = f_{j-1} - g_j / 4**j, g_j the j-fold composition of the hat
    g(t) = 2 ReLU(t) - 4 ReLU(t - 1/2). Each block keeps four neurons
    per layer: the running sum f_j as a (positive, negative) pair whose
    row sums stay small, and the hat pair (ReLU(g), ReLU(g - 1/2)).
    """
    k = rows.shape[0]
    split = np.array([[1.0], [-1.0], [1.0], [-1.0]])
    first = np.kron(rows, split) / (2.0 * bound)
    layers = [(first, np.tile([0.0, 0.0, -0.5, -0.5], k))]
    acc, hat = np.array([1.0, 1.0, 0.0, 0.0]), np.array([2.0, 2.0, -4.0, -4.0])
    for j in range(1, levels):
        f_row = acc - hat / 4.0 ** j
        step = np.vstack([f_row, -f_row, hat, hat])
        layers.append((np.kron(np.eye(k), step),
                       np.tile([0.0, 0.0, 0.0, -0.5], k)))
        acc = np.array([1.0, -1.0, 0.0, 0.0])
        hat = np.array([0.0, 0.0, 2.0, -4.0])
    readout = np.kron(np.eye(k), (acc - hat / 4.0 ** levels)[None, :])
    combine = np.atleast_2d(np.asarray(combine, dtype=float))
    layers.append((combine @ readout, np.zeros(combine.shape[0])))
    return Network(layers, "relu")


def relu_square_net(tau: float, bound: float) -> Network:
    """
    ReLU approximation of x -> x^2 on [-bound, bound] within tau in
    W^{1,inf}; depth ceil(log2(2 bound / tau)) + 1.
    """
    _check_tolerance(tau, bound)
    levels = _sawtooth_levels(tau, bound)
    return _sawtooth_blocks(np.array([[1.0]]), bound, levels,
                            [[4.0 * bound ** 2]])


def relu_product_net(tau: float, bound: float) -> Network:
    """
    ReLU approximation of (x1, x2) -> x1 x2 on [-bound, bound]^2 within
    tau in W^{1,inf}, by polarization
    x1 x2 = 2 M^2 (S(|x1+x2|/2M) - S(|x1|/2M) - S(|x2|/2M)).
    """
    _check_tolerance(tau, bound)
    levels = _sawtooth_levels(tau, bound)
    rows = np.array([[1.0, 1.0], [1.0, 0.0], [0.0, 1.0]])
    return _sawtooth_blocks(rows, bound, levels,
                            [[2.0 * bound ** 2, -2.0 * bound ** 2,
                              -2.0 * bound ** 2]])


def _check_tolerance(tau: float, bound: float) -> None:
    if not tau > 0:
        raise DomainError(f"Invalid tolerance: {tau}. Must be > 0")
    if not bound > 0:
        raise DomainError(f"Invalid range bound: {bound}. Must be > 0")


# Dispatch


def square_net(activation: "Activation | str", tau: float,
               bound: float) -> Network:
    """
    Network approximating x -> x^2 within tau in W^{1,inf}((-M, M)).

    For C^2 activations the depth-2 construction integrates an identity
    net of activation': R(x) = (2 a2/a1)(a(a1 x + t1) - a(t1)) + 2 b2 x,
    with the linear term emulated by a second identity net and the bias
    chosen so that R(0) = 0. Its derivative error is at most tau/M.

    The result is checked on 2001 points of [-M, M]. When float64
    rounding keeps that construction above tau, the net is instead a
    symmetric second difference of 2k neurons around the same anchor
    (k <= 12, see square_floor), whose higher order lets the neurons sit
    far enough apart for the weights to stay moderate.

    Raises:
        ConstructionError: If activation'' vanishes everywhere scanned
            or tau is below square_floor(activation, M).
        NumericOverflowError: If a weight overflows.
    """
    activation = Activation.from_str(activation)
    _check_tolerance(tau, bound)
    if activation.is_relu:
        return relu_square_net(tau, bound)
    net = _smooth_square(activation, tau, bound)
    logger.debug("square_net %s tau=%.3e M=%g size=%d", activation.name,
                 tau, bound, net.size)
    return net


def product_net(activation: "Activation | str", tau: float,
                bound: float) -> Network:
    """
    Network approximating (x1, x2) -> x1 x2 within tau in
    W^{1,inf}((-M, M)^2).

    Smooth activations use 2 f((x1+x2)/2) - 2 f(x1/2) - 2 f(x2/2) with f
    the depth-2 square net at tolerance tau/6, giving depth 2 and a size
    independent of tau and M; the output vanishes up to rounding when an
    input is zero. ReLU uses the sawtooth polarization.
    """
    activation = Activation.from_str(activation)
    _check_tolerance(tau, bound)
    if activation.is_relu:
        return relu_product_net(tau, bound)
    return _polarize(_smooth_square(activation, tau / 6.0, bound))


# Exponential


def exp_net(activation: "Activation | str", tau: float) -> Network:
    """
    Emulation of x -> exp(-x) on x >= 0.

    With x0 = log(2/tau) the tanh net is ((1/2, x0/2), (-1/tau, 1/tau))
    and the sigmoid net ((-1, -x0), (2/tau, 0)); both realize
    exp(-x) / (1 + (tau/2) exp(-x)). The value error is at most tau/2
    and the derivative error at most tau. The tanh neuron saturates at 1
    for every x >= 0 once tau < 0.27; the realization keeps 1 - tanh as
    its own residual, so the output bias cancels the level exactly.

    Raises:
        DomainError: If tau is not in (0, 1] or the activation is neither
            tanh nor sigmoid.
    """
    activation = Activation.from_str(activation)
    if not 0.0 < tau <= 1.0:
        raise DomainError(f"Invalid tolerance: {tau}. Must be in (0, 1]")
    x0 = math.log(2.0 / tau)
    if activation.kind is ActivationKind.TANH:
        layers = [([[0.5]], [0.5 * x0]), ([[-1.0 / tau]], [1.0 / tau])]
    elif activation.kind is ActivationKind.SIGMOID:
        layers = [([[-1.0]], [-x0]), ([[2.0 / tau]], [0.0])]
    else:
        raise DomainError(
            f"Invalid activation: {activation.name}. "
            f"Must be one of ['sigmoid', 'tanh']")
    return Network(layers, activation)

