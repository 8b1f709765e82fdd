#!/usr/bin/env python3
"""
App Views Blueprint

Defines the 'app_views' Blueprint for the API with the URL prefix '/api/v1'.
It groups the status routes, the network routes (build, store, evaluate,
spiking conversion) and the study routes. Each view is registered under the
'/api/v1' prefix for consistent API versioning.

Modules imported:
- index: Status and statistics routes
- networks: Network and spiking network routes
- studies: Convergence study and Chebyshev verification routes
"""
from flask import Blueprint

app_views = Blueprint("app_views", __name__, url_prefix="/api/v1")

from api.v1.views.index import *  # noqa
from api.v1.views.networks import *  # noqa
from api.v1.views.studies import *  # noqa
