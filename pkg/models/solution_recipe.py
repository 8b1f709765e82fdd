#!/usr/bin/env python3
"""
Holds the parameters that determine a tanh/sigmoid solution network.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np


class Regime(Enum):
    """Which branch of the solution-network construction applies."""
    ASYMPTOTIC = "asymptotic"
    PRE_ASYMPTOTIC = "pre-asymptotic"

    @classmethod
    def from_str(cls, value: str) -> "Regime":
        """
        Raises:
            ValueError: If the string is not a valid regime.
        """
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"Invalid regime: {value}. "
                             f"Must be one of {[r.value for r in cls]}")

    @classmethod
    def classify(cls, kappa: float, p: int, epsilon: float) -> "Regime":
        """kappa p eps >= 1/2 is asymptotic."""
        if kappa * p * epsilon >= 0.5:
            return cls.ASYMPTOTIC
        return cls.PRE_ASYMPTOTIC


class Side(Enum):
    """Wall of a boundary layer: + is x = 1, - is x = -1."""
    PLUS = "+"
    MINUS = "-"

    @classmethod
    def from_str(cls, value: str) -> "Side":
        """
        Raises:
            ValueError: If the string is not a valid side.
        """
        key = str(value).strip().lower()
        aliases = {"+": cls.PLUS, "plus": cls.PLUS, "right": cls.PLUS,
                   "-": cls.MINUS, "minus": cls.MINUS, "left": cls.MINUS}
        if key not in aliases:
            raise ValueError(f"Invalid side: {value}. "
                             f"Must be one of {sorted(aliases)}")
        return aliases[key]

    @property
    def sign(self) -> float:
        return 1.0 if self is Side.PLUS else -1.0


@dataclass(frozen=True)
class SolutionNetRecipe:
    """
    Parameters of a solution network for b = 1.

    Attributes:
        epsilon, p, kappa, beta: Problem and schedule parameters.
        regime (Regime): Branch selected by kappa p eps against 1/2.
        smooth (callable): Sampler of the smooth part (or of the whole
            solution in the asymptotic regime).
        c_plus, c_minus (float): Boundary-layer amplitudes.
    """
    epsilon: float
    p: int
    kappa: float
    beta: float
    regime: Regime
    smooth: Callable[[np.ndarray], np.ndarray]
    c_plus: float = 0.0
    c_minus: float = 0.0

    @property
    def tolerance(self) -> float:
        """tau = delta = exp(-beta p) eps, used by the layer networks."""
        return math.exp(-self.beta * self.p) * self.epsilon

    @property
    def range_bound(self) -> float:
        """M = 2/eps + 1, the range of the stretched layer variable."""
        return 2.0 / self.epsilon + 1.0

    @property
    def depth(self) -> int:
        """ceil(log2 p) + 1."""
        return int(math.ceil(math.log2(self.p))) + 1 if self.p > 1 else 1
