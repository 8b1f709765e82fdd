#!/usr/bin/env python3
"""
Builds the named network constructions from declarative specs, as used
by the emit-net command and POST /networks.

A spec is a mapping with a "construction" key and the parameters of that
construction, for example
{"construction": "exp", "activation": "tanh", "tau": 0.01}.

Functions:
    - build_network: Network for a spec.
    - evaluate_network: JSON-ready values and Jacobians.
    - spiking_params: RescaleParams from a request document.
"""
import logging
from typing import Any, Callable, Dict

import numpy as np

from api.v1.services.cheb_service import cheb_tree_net, poly_net
from api.v1.services.emulation_service import (exp_net, identity_net,
                                               product_net, square_net)
from api.v1.services.relu_service import exp_relu_net, fem_relu_net
from api.v1.services.solution_service import boundary_layer_net, solution_net
from api.v1.utils.schema_utils import NETWORK_SCHEMA, SNN_SCHEMA, validate
from config import Config
from models.cheb_expansion import ChebExpansion
from models.errors import ConfigError
from models.network import Network
from models.problem import BvpProblem
from models.spiking_network import RescaleParams

logger = logging.getLogger(__name__)


def _require(spec: Dict[str, Any], *keys: str) -> list:
    missing = [key for key in keys if key not in spec]
    if missing:
        raise ConfigError(f"Construction {spec['construction']} needs "
                          f"{', '.join(missing)}")
    return [spec[key] for key in keys]


def _problem(spec: Dict[str, Any]) -> BvpProblem:
    problem = dict(spec.get("problem", {}))
    if "epsilon" in spec:
        problem.setdefault("epsilon", spec["epsilon"])
    return BvpProblem.from_json(problem)


def _kappa(spec: Dict[str, Any]) -> float:
    return float(spec.get("kappa", Config.DEFAULT_KAPPA))


def _beta(spec: Dict[str, Any]) -> float:
    return float(spec.get("beta", Config.DEFAULT_BETA))


_BUILDERS: Dict[str, Callable[[Dict[str, Any]], Network]] = {
    "identity": lambda s: identity_net(
        s.get("activation", "tanh"), *_require(s, "depth", "tau"),
        s.get("bound", 1.0)),
    "square": lambda s: square_net(
        s.get("activation", "tanh"), *_require(s, "tau"),
        s.get("bound", 1.0)),
    "product": lambda s: product_net(
        s.get("activation", "tanh"), *_require(s, "tau"),
        s.get("bound", 1.0)),
    "exp": lambda s: exp_net(s.get("activation", "tanh"),
                             *_require(s, "tau")),
    "cheb-tree": lambda s: cheb_tree_net(
        s.get("activation", "tanh"), *_require(s, "m", "delta")).net,
    "poly": lambda s: poly_net(
        s.get("activation", "tanh"),
        ChebExpansion(_require(s, "coefficients")[0]),
        *_require(s, "delta")),
    "boundary-layer": lambda s: boundary_layer_net(
        s.get("activation", "tanh"), *_require(s, "epsilon"),
        s.get("c", 1.0), s.get("side", "-"), *_require(s, "p"), _beta(s)),
    "solution": lambda s: solution_net(
        s.get("activation", "tanh"), _problem(s), *_require(s, "p"),
        _kappa(s), _beta(s), bool(s.get("exact_boundary", False))),
    "fem-relu": lambda s: fem_relu_net(
        _problem(s), _kappa(s), *_require(s, "p"), _beta(s)),
    "exp-relu": lambda s: exp_relu_net(
        *_require(s, "epsilon"), _kappa(s), *_require(s, "p"), _beta(s)),
}


def build_network(spec: Dict[str, Any]) -> Network:
    """
    Builds the network a spec describes.

    Raises:
        ConfigError: If the spec violates NETWORK_SCHEMA or misses a
            parameter of its construction.
        LayerNetError: Whatever the construction raises.
    """
    validate(spec, NETWORK_SCHEMA)
    net = _BUILDERS[spec["construction"]](spec)
    logger.info("Built %s: %s", spec["construction"], net)
    return net


def evaluate_network(net: Network, x: Any) -> Dict[str, Any]:
    """
    Realizes net at x.

    Args:
        x: A point, a list of points, or a list of scalars for 1-input
            networks.

    Returns:
        dict: {"value": [...], "jacobian": [...]}.
    """
    points = np.asarray(x, dtype=float)
    if net.input_dim == 1 and points.ndim == 1:
        points = points.reshape(-1, 1)
    result = net.realize(points)
    return {"value": result.value.tolist(),
            "jacobian": result.jacobian.tolist()}


def spiking_params(data: Dict[str, Any]) -> RescaleParams:
    """
    Raises:
        ConfigError: If data violates SNN_SCHEMA.
    """
    validate(data, SNN_SCHEMA)
    return RescaleParams(float(data.get("delta", Config.SNN_DELTA)),
                         float(data.get("bound", Config.SNN_BOUND)),
                         tuple(data.get("input_box", (-1.0, 1.0))))
