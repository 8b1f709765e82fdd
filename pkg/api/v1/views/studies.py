#!/usr/bin/env python3
"""
Routes that run convergence studies and Chebyshev tree checks.

Functions:
- run_study: POST /studies.
- verify_cheb: POST /verify/cheb.
"""
from api.v1.views import app_views
from flask import abort, jsonify, request
from models.errors import LayerNetError
from api.v1.services.cheb_service import verify_cheb_trees
from api.v1.services.study_service import convergence_study
from api.v1.utils.schema_utils import CHEB_SCHEMA, validate
from flask.typing import ResponseReturnValue


@app_views.route('/studies', methods=['POST'], strict_slashes=False)
def run_study() -> ResponseReturnValue:
    """
    POST /api/v1/studies

    Body: a study config ({"method", "p", "epsilon", ...}) and an
    optional "seed".
    Runs in the request process; returns rows, fits, the robustness
    ratio and whether any row was flagged.
    """
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        abort(400, description="Not a JSON object")
    data = dict(data)
    seed = data.pop("seed", None)
    try:
        result = convergence_study(data, jobs=1, seed=seed)
    except LayerNetError as err:
        abort(400, description=str(err))
    return jsonify(result.to_json())


@app_views.route('/verify/cheb', methods=['POST'], strict_slashes=False)
def verify_cheb() -> ResponseReturnValue:
    """
    POST /api/v1/verify/cheb

    Body: {"m": int or list, "delta": float or list, "activation",
    "samples"}.
    """
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        abort(400, description="Not a JSON object")
    try:
        validate(data, CHEB_SCHEMA)
        ms = data["m"] if isinstance(data["m"], list) else [data["m"]]
        deltas = (data["delta"] if isinstance(data["delta"], list)
                  else [data["delta"]])
        rows = verify_cheb_trees(data.get("activation", "tanh"), ms, deltas,
                                 int(data.get("samples", 10000)))
    except (LayerNetError, ValueError) as err:
        abort(400, description=str(err))
    return jsonify({"trees": rows,
                    "passed": all(row["passed"] for row in rows)})
