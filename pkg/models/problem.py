#!/usr/bin/env python3
"""
Holds the model problem -eps^2 u'' + b u = f on (-1, 1), u(-1) = u(1) = 0.

Data terms (the reaction coefficient b and the source f) are closed-form
Term objects so problems can be described in JSON/YAML configs and the
reference solutions can be written down when a closed form exists.

Classes:
    - TermKind: Enum of closed-form term families.
    - Term: One data term with evaluators and analyticity constants.
    - BvpProblem: eps, b and f.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from models.errors import ConfigError, DomainError

# Grid on which non-constant coefficients are checked for positivity.
_CHECK_POINTS = np.linspace(-1.0, 1.0, 2001)


class TermKind(Enum):
    """Families of data terms."""
    CONSTANT = "constant"
    EXPONENTIAL = "exponential"
    POLYNOMIAL = "polynomial"
    FUNCTION = "function"

    @classmethod
    def from_str(cls, value: str) -> "TermKind":
        """
        Convert a string to a TermKind.

        Raises:
            ValueError: If the string is not a valid kind.
        """
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(
                f"Invalid term kind: {value}. "
                f"Must be one of {[k.value for k in cls]}")


@dataclass(frozen=True)
class Term:
    """
    A closed-form data term on [-1, 1].

    constant: value. exponential: scale * exp(rate * x). polynomial:
    sum_k coefficients[k] x^k (ascending powers). function: an arbitrary
    callable, with optional analyticity constants.
    """
    kind: TermKind
    value: float = 0.0
    scale: float = 1.0
    rate: float = 0.0
    coefficients: Tuple[float, ...] = ()
    fn: Optional[Callable[[np.ndarray], np.ndarray]] = field(
        default=None, repr=False, compare=False)
    constants: Optional[Tuple[float, float]] = None

    @classmethod
    def constant(cls, value: float) -> "Term":
        return cls(TermKind.CONSTANT, value=float(value))

    @classmethod
    def exponential(cls, rate: float, scale: float = 1.0) -> "Term":
        return cls(TermKind.EXPONENTIAL, rate=float(rate), scale=float(scale))

    @classmethod
    def polynomial(cls, coefficients: Any) -> "Term":
        return cls(TermKind.POLYNOMIAL,
                   coefficients=tuple(float(c) for c in coefficients))

    @classmethod
    def function(cls, fn: Callable[[np.ndarray], np.ndarray],
                 constants: Optional[Tuple[float, float]] = None) -> "Term":
        return cls(TermKind.FUNCTION, fn=fn, constants=constants)

    def __call__(self, x: Any) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind is TermKind.CONSTANT:
            return np.full_like(x, self.value)
        if self.kind is TermKind.EXPONENTIAL:
            return self.scale * np.exp(self.rate * x)
        if self.kind is TermKind.POLYNOMIAL:
            return P.polyval(x, self.coefficients) + 0.0 * x
        return np.asarray(self.fn(x), dtype=float) + 0.0 * x

    def scaled(self, factor: float) -> "Term":
        """The term multiplied by factor, in the same family."""
        factor = float(factor)
        if self.kind is TermKind.CONSTANT:
            return Term.constant(self.value * factor)
        if self.kind is TermKind.EXPONENTIAL:
            return Term.exponential(self.rate, self.scale * factor)
        if self.kind is TermKind.POLYNOMIAL:
            return Term.polynomial([c * factor for c in self.coefficients])
        fn = self.fn
        constants = None
        if self.constants is not None:
            constants = (abs(factor) * self.constants[0], self.constants[1])
        return Term.function(lambda x: factor * fn(x), constants)

    @property
    def is_constant(self) -> bool:
        if self.kind is TermKind.CONSTANT:
            return True
        if self.kind is TermKind.POLYNOMIAL:
            return not any(self.coefficients[1:])
        if self.kind is TermKind.EXPONENTIAL:
            return self.rate == 0.0 or self.scale == 0.0
        return False

    @property
    def constant_value(self) -> float:
        """Value of a constant term (error for non-constant ones)."""
        if not self.is_constant:
            raise DomainError(f"Term {self.kind.value} is not constant")
        return float(self(np.zeros(1))[0])

    def analyticity(self) -> Tuple[float, float]:
        """
        Constants (C, K) with ||g^(n)||_inf <= C K^n n! on [-1, 1].

        Polynomials use K = 1 and C = max_n ||g^(n)||_inf / n!.
        Function terms return the constants they were given, or NaN.
        """
        if self.kind is TermKind.CONSTANT:
            return abs(self.value), 1.0
        if self.kind is TermKind.EXPONENTIAL:
            return abs(self.scale) * math.exp(abs(self.rate)), \
                max(abs(self.rate), 1e-300)
        if self.kind is TermKind.POLYNOMIAL:
            coeffs = np.array(self.coefficients or (0.0,))
            best = 0.0
            for n in range(len(coeffs)):
                deriv = P.polyder(coeffs, n) if n else coeffs
                bound = float(np.max(np.abs(P.polyval(_CHECK_POINTS, deriv))))
                best = max(best, bound / math.factorial(n))
            return best, 1.0
        return self.constants or (math.nan, math.nan)

    def to_json(self) -> Dict[str, Any]:
        """
        Declarative form used in configs.

        Raises:
            ConfigError: For function terms, which have no declarative form.
        """
        if self.kind is TermKind.CONSTANT:
            return {"kind": "constant", "value": self.value}
        if self.kind is TermKind.EXPONENTIAL:
            return {"kind": "exponential", "rate": self.rate,
                    "scale": self.scale}
        if self.kind is TermKind.POLYNOMIAL:
            return {"kind": "polynomial",
                    "coefficients": list(self.coefficients)}
        raise ConfigError("Function terms cannot be serialized")

    @classmethod
    def from_json(cls, data: Any) -> "Term":
        """
        Builds a term from a number or a {"kind", ...} mapping.

        Raises:
            ConfigError: On an unknown kind or missing fields.
        """
        if isinstance(data, (int, float)):
            return cls.constant(data)
        try:
            kind = TermKind.from_str(data["kind"])
            if kind is TermKind.CONSTANT:
                return cls.constant(data["value"])
            if kind is TermKind.EXPONENTIAL:
                return cls.exponential(data["rate"], data.get("scale", 1.0))
            if kind is TermKind.POLYNOMIAL:
                return cls.polynomial(data["coefficients"])
        except (KeyError, TypeError, ValueError) as err:
            raise ConfigError(f"Invalid term {data!r}: {err}") from err
        raise ConfigError(f"Term kind {kind.value} cannot be configured")


@dataclass(frozen=True)
class BvpProblem:
    """
    -eps^2 u'' + b u = f on (-1, 1) with homogeneous Dirichlet data.

    Attributes:
        epsilon (float): Singular perturbation parameter in (0, 1].
        b (Term): Reaction coefficient, bounded below by b_min > 0.
        f (Term): Source term.
    """
    epsilon: float
    b: Term = field(default_factory=lambda: Term.constant(1.0))
    f: Term = field(default_factory=lambda: Term.constant(1.0))

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon <= 1.0:
            raise DomainError(
                f"Invalid epsilon: {self.epsilon}. Must be in (0, 1]")
        if not self.b_min > 0.0:
            raise DomainError(
                f"Reaction coefficient must be positive, min is "
                f"{self.b_min}")

    @property
    def has_constant_b(self) -> bool:
        return self.b.is_constant

    @property
    def b_min(self) -> float:
        """Lower bound of b on [-1, 1] (exact for constant b)."""
        if self.b.is_constant:
            return self.b.constant_value
        return float(np.min(self.b(_CHECK_POINTS)))

    def with_epsilon(self, epsilon: float) -> "BvpProblem":
        return BvpProblem(epsilon, self.b, self.f)

    def to_json(self) -> Dict[str, Any]:
        return {"epsilon": self.epsilon, "b": self.b.to_json(),
                "f": self.f.to_json()}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "BvpProblem":
        """
        Raises:
            ConfigError: On missing fields or invalid values.
        """
        try:
            return cls(float(data["epsilon"]),
                       Term.from_json(data.get("b", 1.0)),
                       Term.from_json(data.get("f", 1.0)))
        except KeyError as err:
            raise ConfigError(f"Problem is missing {err}") from err
        except DomainError as err:
            raise ConfigError(str(err)) from err
