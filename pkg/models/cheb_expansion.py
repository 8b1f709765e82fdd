#!/usr/bin/env python3
"""
Holds the ChebExpansion value type: coefficients of a polynomial in the
Chebyshev basis T_0, ..., T_p on [-1, 1].
"""
from dataclasses import dataclass, field
from typing import Any, Tuple

import numpy as np
from numpy.polynomial import chebyshev as C


@dataclass(frozen=True)
class ChebExpansion:
    """
    v(x) = sum_k coefficients[k] T_k(x).

    Attributes:
        coefficients (np.ndarray): v_0, ..., v_p (read-only copy).
    """
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        coefficients = np.array(self.coefficients, dtype=float, ndmin=1)
        coefficients.setflags(write=False)
        object.__setattr__(self, "coefficients", coefficients)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x: Any) -> np.ndarray:
        return C.chebval(np.asarray(x, dtype=float), self.coefficients)

    def derivative(self, x: Any) -> np.ndarray:
        """Values of v' at x."""
        if self.degree == 0:
            return np.zeros_like(np.asarray(x, dtype=float))
        return C.chebval(np.asarray(x, dtype=float),
                         C.chebder(self.coefficients))

    def evaluate(self, x: Any) -> Tuple[np.ndarray, np.ndarray]:
        return self(x), self.derivative(x)

    def l1_tail(self) -> float:
        """sum_{k >= 1} |v_k|, the factor in emulation error bounds."""
        return float(np.sum(np.abs(self.coefficients[1:])))

    def to_json(self) -> dict:
        return {"coefficients": self.coefficients.tolist()}
