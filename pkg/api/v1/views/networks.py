#!/usr/bin/env python3
"""
This module contains routes for building, storing, evaluating and
converting networks.

It includes endpoints for:
- Listing stored networks with pagination
- Retrieving and deleting a network by its ID
- Building a network from a construction spec and storing it
- Evaluating a stored network at given points
- Converting a stored ReLU network into a spiking network

Functions:
- get_networks: Lists stored networks.
- get_network: Retrieves a network by its ID.
- delete_network: Deletes a network by its ID.
- create_network: Builds and stores a network.
- evaluate: Realizes a network at the posted points.
- spiking: Converts a network, stores the result and reports the
  equivalence check.
- get_spiking_network: Retrieves a spiking network by its ID.
"""
from api.v1.views import app_views
from flask import abort, jsonify, request
from models import storage
from models.errors import LayerNetError
from models.network import Network
from models.spiking_network import SpikingNetwork
from api.v1.utils.pagination_utils import get_paginated_data
from api.v1.services.network_service import (build_network,
                                             evaluate_network,
                                             spiking_params)
from api.v1.services.snn_service import convert, verify_equivalence
from config import Config
from flask.typing import ResponseReturnValue


def _json_body() -> dict:
    data = request.get_json(silent=True)
    if data is None:
        abort(400, description="Not a JSON")
    if not isinstance(data, dict):
        abort(400, description="JSON body must be an object")
    return data


def _get_or_404(cls, object_id: str):
    obj = storage.get(cls, object_id)
    if obj is None:
        abort(404, description=f"{cls.__name__} not found")
    return obj


@app_views.route('/networks', methods=['GET'], strict_slashes=False)
def get_networks() -> ResponseReturnValue:
    """
    GET /api/v1/networks

    Lists stored networks, page by page (query: page, page_size).
    """
    try:
        page = int(request.args.get('page', 1))
        page_size = int(request.args.get('page_size', 10))
        if page <= 0 or page_size <= 0:
            raise ValueError
    except (ValueError, TypeError):
        abort(400, description="page and page_size must be positive integers")

    result = get_paginated_data(storage, Network, page=page,
                                page_size=page_size)
    result["networks"] = result.pop("data")
    return jsonify(result)


@app_views.route('/networks/<network_id>', methods=['GET'],
                 strict_slashes=False)
def get_network(network_id: str) -> ResponseReturnValue:
    """
    GET /api/v1/networks/:id

    Returns the network in its interchange format.
    """
    return jsonify(_get_or_404(Network, network_id).to_json())


@app_views.route('/networks/<network_id>', methods=['DELETE'],
                 strict_slashes=False)
def delete_network(network_id: str) -> ResponseReturnValue:
    """
    DELETE /api/v1/networks/:id
    """
    network = _get_or_404(Network, network_id)
    network.delete()
    return jsonify({}), 200


@app_views.route('/networks', methods=['POST'], strict_slashes=False)
def create_network() -> ResponseReturnValue:
    """
    POST /api/v1/networks

    Body: a construction spec, e.g.
    {"construction": "exp", "activation": "tanh", "tau": 0.01}.

    Return:
        The stored network with status 201.
    """
    spec = _json_body()
    try:
        network = build_network(spec)
    except (LayerNetError, ValueError) as err:
        abort(400, description=str(err))
    network.save()
    return jsonify(network.to_json()), 201


@app_views.route('/networks/<network_id>/evaluate', methods=['POST'],
                 strict_slashes=False)
def evaluate(network_id: str) -> ResponseReturnValue:
    """
    POST /api/v1/networks/:id/evaluate

    Body: {"x": [...]}; returns {"value", "jacobian"}.
    """
    network = _get_or_404(Network, network_id)
    data = _json_body()
    if "x" not in data:
        abort(400, description="Missing x")
    try:
        return jsonify(evaluate_network(network, data["x"]))
    except (LayerNetError, ValueError, TypeError) as err:
        abort(400, description=str(err))


@app_views.route('/networks/<network_id>/spiking', methods=['POST'],
                 strict_slashes=False)
def spiking(network_id: str) -> ResponseReturnValue:
    """
    POST /api/v1/networks/:id/spiking

    Body (optional): {"delta", "bound", "input_box", "samples", "seed"}.
    Rescales and converts the ReLU network, stores the spiking network
    and returns it with the equivalence report.
    """
    network = _get_or_404(Network, network_id)
    data = request.get_json(silent=True) or {}
    seed = data.get("seed", Config.DEFAULT_SEED)
    try:
        params = spiking_params(data)
        snn = convert(network, params, seed)
        report = verify_equivalence(network, snn,
                                    int(data.get("samples", 1000)), seed)
    except (LayerNetError, ValueError) as err:
        abort(400, description=str(err))
    snn.save()
    return jsonify({"spiking_network": snn.to_json(),
                    "report": report.to_json()}), 201


@app_views.route('/spiking_networks/<snn_id>', methods=['GET'],
                 strict_slashes=False)
def get_spiking_network(snn_id: str) -> ResponseReturnValue:
    """
    GET /api/v1/spiking_networks/:id
    """
    return jsonify(_get_or_404(SpikingNetwork, snn_id).to_json())
