#!/usr/bin/env python3
"""
Network calculus: the rules that assemble larger networks from smaller
ones with exact control of depth and size.

Functions:
    - affine_net: Depth-1 network x -> A x + b.
    - parallelize: Same input, stacked outputs.
    - sum_networks: Same input, summed outputs.
    - full_parallelize: Concatenated inputs, stacked outputs.
    - concatenate: Composition n1 o n2 with the two boundary layers merged.
    - scale_output: Multiplies the output layer by a matrix or scalar.
"""
import logging
from typing import Any, Optional, Sequence

import numpy as np
from scipy.linalg import block_diag

from models.activation import Activation
from models.errors import CalculusError
from models.network import Layer, Network

logger = logging.getLogger(__name__)


def affine_net(A: Any, b: Any, activation: "Activation | str" = "relu"
               ) -> Network:
    """
    Builds the depth-1 network x -> A x + b.

    The activation is only recorded; a depth-1 net never applies it.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    return Network([(A, b)], activation)


def _common_activation(n1: Network, n2: Network) -> Activation:
    """Activation of a combined network; depth-1 operands adapt."""
    if n1.activation is n2.activation:
        return n1.activation
    if n1.depth == 1:
        return n2.activation
    if n2.depth == 1:
        return n1.activation
    raise CalculusError(
        f"Cannot combine a {n1.activation.name} network with a "
        f"{n2.activation.name} network")


def parallelize(n1: Network, n2: Network) -> Network:
    """
    Parallelization: R(out)(x) = (R(n1)(x), R(n2)(x)).

    Args:
        n1, n2: Networks with equal input dimension and equal depth.

    Returns:
        Network: Depth L, size M(n1) + M(n2).

    Raises:
        CalculusError: On a depth or input-dimension mismatch.
    """
    if n1.depth != n2.depth:
        raise CalculusError(
            f"parallelize needs equal depths, got {n1.depth} and "
            f"{n2.depth}; pad the shallower network first")
    if n1.input_dim != n2.input_dim:
        raise CalculusError(
            f"parallelize needs equal input dimensions, got "
            f"{n1.input_dim} and {n2.input_dim}")
    activation = _common_activation(n1, n2)
    first1, first2 = n1.layers[0], n2.layers[0]
    layers = [Layer(np.vstack([first1.A, first2.A]),
                    np.concatenate([first1.b, first2.b]))]
    for l1, l2 in zip(n1.layers[1:], n2.layers[1:]):
        layers.append(Layer(block_diag(l1.A, l2.A),
                            np.concatenate([l1.b, l2.b])))
    return Network(layers, activation)


def sum_networks(n1: Network, n2: Network) -> Network:
    """
    Sum: R(out) = R(n1) + R(n2).

    The hidden layers are those of parallelize(n1, n2); the output layer
    is [A1_L A2_L] with added biases, so M(out) <= M(n1) + M(n2).

    Raises:
        CalculusError: On mismatched depth, input or output dimension.
    """
    if n1.output_dim != n2.output_dim:
        raise CalculusError(
            f"sum needs equal output dimensions, got {n1.output_dim} and "
            f"{n2.output_dim}")
    stacked = parallelize(n1, n2)
    last1, last2 = n1.layers[-1], n2.layers[-1]
    if n1.depth == 1:
        out = Layer(last1.A + last2.A, last1.b + last2.b)
    else:
        out = Layer(np.hstack([last1.A, last2.A]), last1.b + last2.b)
    return Network(list(stacked.layers[:-1]) + [out], stacked.activation)


def sum_many(nets: Sequence[Network]) -> Network:
    """Left fold of sum_networks over two or more networks."""
    if not nets:
        raise CalculusError("sum_many needs at least one network")
    out = nets[0]
    for net in nets[1:]:
        out = sum_networks(out, net)
    return out


def full_parallelize(n1: Network, n2: Network) -> Network:
    """
    Full parallelization: R(out)(x1, x2) = (R(n1)(x1), R(n2)(x2)).

    Every layer, including the first, is block diagonal, so
    M(out) = M(n1) + M(n2).

    Raises:
        CalculusError: On a depth mismatch.
    """
    if n1.depth != n2.depth:
        raise CalculusError(
            f"full_parallelize needs equal depths, got {n1.depth} and "
            f"{n2.depth}; pad the shallower network first")
    activation = _common_activation(n1, n2)
    layers = [Layer(block_diag(l1.A, l2.A), np.concatenate([l1.b, l2.b]))
              for l1, l2 in zip(n1.layers, n2.layers)]
    return Network(layers, activation)


def full_parallelize_many(nets: Sequence[Network]) -> Network:
    """Left fold of full_parallelize over two or more networks."""
    if not nets:
        raise CalculusError("full_parallelize_many needs a network")
    out = nets[0]
    for net in nets[1:]:
        out = full_parallelize(out, net)
    return out


def concatenate(n1: Network, n2: Network) -> Network:
    """
    Concatenation n1 o n2 (n2 is applied first).

    The output layer of n2 and the first layer of n1 merge into
    (A1_1 A2_L, A1_1 b2_L + b1_1), so L(out) = L(n1) + L(n2) - 1.

    Raises:
        CalculusError: If n1's input dimension differs from n2's output
            dimension, or the activations differ.
    """
    if n1.input_dim != n2.output_dim:
        raise CalculusError(
            f"concatenate: outer network expects {n1.input_dim} inputs, "
            f"inner network produces {n2.output_dim}")
    activation = _common_activation(n1, n2)
    inner_last, outer_first = n2.layers[-1], n1.layers[0]
    merged = Layer(outer_first.A @ inner_last.A,
                   outer_first.A @ inner_last.b + outer_first.b)
    layers = list(n2.layers[:-1]) + [merged] + list(n1.layers[1:])
    return Network(layers, activation)


def concatenate_chain(*nets: Network) -> Network:
    """concatenate_chain(a, b, c) = a o b o c."""
    if not nets:
        raise CalculusError("concatenate_chain needs a network")
    out = nets[-1]
    for net in reversed(nets[:-1]):
        out = concatenate(net, out)
    return out


def scale_output(net: Network, weight: Any,
                 bias: Optional[Any] = None) -> Network:
    """
    Post-composes with the affine map y -> W y + c.

    Args:
        net: Network to modify.
        weight: Matrix W, or a scalar multiplying the identity.
        bias: Vector c (zero when omitted).
    """
    weight = np.asarray(weight, dtype=float)
    if weight.ndim == 0:
        weight = float(weight) * np.eye(net.output_dim)
    if bias is None:
        bias = np.zeros(weight.shape[0])
    return concatenate(affine_net(weight, bias, net.activation), net)
