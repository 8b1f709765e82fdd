#!/usr/bin/env python3
"""
Schema Utility Module.

Loads JSON or YAML config files and validates config documents (CLI
files and API request bodies) against Draft 7 JSON schemas.

Functions:
    - load_config: Reads a .json, .yaml or .yml file.
    - validate: Checks a document against a schema.
"""
import json
import os
from typing import Any, Dict

import yaml
from jsonschema import Draft7Validator
from jsonschema.exceptions import best_match

from models.errors import ConfigError

_TERM = {
    "oneOf": [
        {"type": "number"},
        {"type": "object",
         "required": ["kind"],
         "properties": {
             "kind": {"enum": ["constant", "exponential", "polynomial"]},
             "value": {"type": "number"},
             "rate": {"type": "number"},
             "scale": {"type": "number"},
             "coefficients": {"type": "array",
                              "items": {"type": "number"},
                              "minItems": 1}}},
    ]
}

PROBLEM_SCHEMA = {
    "type": "object",
    "properties": {
        "epsilon": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "b": _TERM,
        "f": _TERM,
    },
}

STUDY_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["method", "p", "epsilon"],
    "additionalProperties": False,
    "properties": {
        "method": {"enum": ["fem", "fem-interp", "relu", "snn", "tanh",
                            "sigmoid", "relu-exp", "tanh-exp"]},
        "p": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "epsilon": {"type": "array", "minItems": 1,
                    "items": {"type": "number", "exclusiveMinimum": 0,
                              "maximum": 1}},
        "problem": PROBLEM_SCHEMA,
        "kappa": {"type": "number", "exclusiveMinimum": 0},
        "beta": {"type": "number", "exclusiveMinimum": 0},
        "norm": {"enum": ["l2", "h1_semi", "linf", "energy", "balanced",
                          "w1inf"]},
        "samples": {"type": "integer", "minimum": 10},
        "exact_boundary": {"type": "boolean"},
    },
}

NETWORK_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["construction"],
    "properties": {
        "construction": {"enum": ["identity", "square", "product", "exp",
                                  "cheb-tree", "poly", "boundary-layer",
                                  "solution", "fem-relu", "exp-relu"]},
        "activation": {"type": "string"},
        "depth": {"type": "integer", "minimum": 1},
        "tau": {"type": "number", "exclusiveMinimum": 0},
        "bound": {"type": "number", "minimum": 1},
        "m": {"type": "integer", "minimum": 2},
        "delta": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "coefficients": {"type": "array", "items": {"type": "number"},
                         "minItems": 1},
        "p": {"type": "integer", "minimum": 1},
        "epsilon": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "c": {"type": "number"},
        "side": {"enum": ["+", "-"]},
        "kappa": {"type": "number", "exclusiveMinimum": 0},
        "beta": {"type": "number", "exclusiveMinimum": 0},
        "problem": PROBLEM_SCHEMA,
        "exact_boundary": {"type": "boolean"},
    },
}

SNN_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "properties": {
        "delta": {"type": "number", "exclusiveMinimum": 0,
                  "exclusiveMaximum": 1},
        "bound": {"type": "number", "exclusiveMinimum": 0},
        "input_box": {"type": "array", "items": {"type": "number"},
                      "minItems": 2, "maxItems": 2},
        "samples": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer"},
    },
}

CHEB_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["m", "delta"],
    "properties": {
        "activation": {"type": "string"},
        "m": {"oneOf": [{"type": "integer", "minimum": 2},
                        {"type": "array",
                         "items": {"type": "integer", "minimum": 2},
                         "minItems": 1}]},
        "delta": {"oneOf": [{"type": "number", "exclusiveMinimum": 0,
                             "exclusiveMaximum": 1},
                            {"type": "array", "minItems": 1,
                             "items": {"type": "number",
                                       "exclusiveMinimum": 0,
                                       "exclusiveMaximum": 1}}]},
        "samples": {"type": "integer", "minimum": 10},
    },
}


def load_config(path: str) -> Dict[str, Any]:
    """
    Reads a config file; .yaml and .yml go through yaml.safe_load, every
    other extension through json.

    Raises:
        ConfigError: If the file cannot be read or parsed, or does not
            hold a mapping.
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            if os.path.splitext(path)[1].lower() in (".yaml", ".yml"):
                data = yaml.safe_load(handle)
            else:
                data = json.load(handle)
    except (OSError, ValueError, yaml.YAMLError) as err:
        raise ConfigError(f"Cannot read config {path}: {err}") from err
    if not isinstance(data, dict):
        raise ConfigError(f"Config {path} must hold a mapping")
    return data


def validate(data: Any, schema: Dict[str, Any]) -> Dict[str, Any]:
    """
    Validates data against a Draft 7 schema.

    Returns:
        dict: data itself.

    Raises:
        ConfigError: With the most relevant validation message.
    """
    error = best_match(Draft7Validator(schema).iter_errors(data))
    if error is not None:
        where = "/".join(str(part) for part in error.absolute_path)
        raise ConfigError(f"Invalid config{' at ' + where if where else ''}"
                          f": {error.message}")
    return data
