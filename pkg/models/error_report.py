#!/usr/bin/env python3
"""
Holds the records produced by convergence studies.

Classes:
    - Method: Enum of study methods.
    - ErrorReport: Errors of one approximation at one (p, eps).
    - RateFit: Least-squares fit of log(error) against p.
"""
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

# Columns written by the CSV study output, in order.
CSV_COLUMNS = ("method", "p", "epsilon", "l2", "h1_semi", "linf", "energy",
               "balanced", "depth", "size", "walltime_ms")


class Method(Enum):
    """Approximation methods a convergence study can measure."""
    FEM = "fem"
    FEM_INTERP = "fem-interp"
    RELU = "relu"
    SNN = "snn"
    TANH = "tanh"
    SIGMOID = "sigmoid"
    RELU_EXP = "relu-exp"
    TANH_EXP = "tanh-exp"

    @classmethod
    def from_str(cls, value: str) -> "Method":
        """
        Convert a string to a Method.

        Raises:
            ValueError: If the string is not a valid method.
        """
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValueError(f"Invalid method: {value}. "
                             f"Must be one of {[m.value for m in cls]}")

    @property
    def is_network(self) -> bool:
        return self not in (Method.FEM, Method.FEM_INTERP)


@dataclass
class ErrorReport:
    """
    One row of a convergence study.

    The balanced norm satisfies balanced^2 = eps h1_semi^2 + l2^2. depth
    and size are 0 for methods that do not build a network.
    """
    method: str
    p: int
    epsilon: float
    l2: float
    h1_semi: float
    linf: float
    energy: float
    balanced: float
    depth: int = 0
    size: int = 0
    walltime_ms: float = 0.0
    w1inf: float = math.nan
    flagged: bool = False
    extra: Dict[str, Any] = field(default_factory=dict)

    def csv_row(self) -> List[Any]:
        return [getattr(self, column) for column in CSV_COLUMNS]

    def to_json(self) -> Dict[str, Any]:
        data = asdict(self)
        if not data["extra"]:
            data.pop("extra")
        return data


@dataclass
class RateFit:
    """
    log(error) ~ intercept - rate * p, fitted by least squares.

    Attributes:
        epsilon (float): The eps the fit belongs to.
        rate (float): Fitted decay rate (positive for decaying errors).
        intercept (float): Fitted log(C).
        residual (float): Root mean square residual of the fit.
        p_values (list): Degrees used (errors above the floor only).
    """
    epsilon: float
    rate: Optional[float]
    intercept: Optional[float]
    residual: Optional[float]
    p_values: List[int] = field(default_factory=list)

    def to_json(self) -> Dict[str, Any]:
        return asdict(self)
