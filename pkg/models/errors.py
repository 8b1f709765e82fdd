#!/usr/bin/env python3
"""
Exception hierarchy shared by the models, the services, the API and the CLI.

Every error raised on purpose by layernet derives from LayerNetError so
callers can catch the whole family at once. Errors that describe bad input
values also derive from ValueError.

Classes:
    - LayerNetError: Base class.
    - InputShapeError: Array dimensions do not match a network or sampler.
    - CalculusError: Network calculus operands are incompatible.
    - ConstructionError: A closed-form construction found no admissible
      parameters (e.g. no anchor with nonzero derivative).
    - NumericOverflowError: A weight or scale factor is not finite.
    - DomainError: An argument lies outside its admissible range.
    - SolverError: The Galerkin system could not be solved.
    - DecompositionError: The boundary-layer split failed its wall check.
    - UnsupportedProblemError: A construction does not cover the problem.
    - UnsupportedReferenceError: No closed-form reference exists.
    - InvariantError: An internal invariant was violated.
    - ConfigError: A configuration file is invalid.
"""


class LayerNetError(Exception):
    """Base class for all layernet errors."""


class InputShapeError(LayerNetError, ValueError):
    """Raised when inputs do not have the expected dimension."""


class CalculusError(LayerNetError):
    """Raised when two networks cannot be combined."""


class ConstructionError(LayerNetError):
    """Raised when a network construction has no admissible parameters."""


class NumericOverflowError(LayerNetError, ArithmeticError):
    """Raised when a constructed weight is not a finite float."""


class DomainError(LayerNetError, ValueError):
    """Raised when a parameter is outside its admissible range."""


class SolverError(LayerNetError):
    """Raised when a linear system cannot be solved."""


class DecompositionError(LayerNetError):
    """Raised when the smooth/layer split does not satisfy the walls."""


class UnsupportedProblemError(LayerNetError):
    """Raised when a construction requires a simpler problem class."""


class UnsupportedReferenceError(LayerNetError):
    """Raised when a problem has no closed-form solution."""


class InvariantError(LayerNetError):
    """Raised when an internal invariant does not hold."""


class ConfigError(LayerNetError, ValueError):
    """Raised when a configuration is invalid."""
