#!/usr/bin/env python3
"""
Holds the Mesh type: a partition -1 = x_0 < x_1 < ... < x_N = 1 of the
interval (-1, 1) into elements I_j = (x_{j-1}, x_j).
"""
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from models.errors import DomainError


@dataclass(frozen=True)
class Mesh:
    """
    A partition of [-1, 1].

    Attributes:
        nodes (np.ndarray): Strictly increasing, first node -1, last 1.
    """
    nodes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        nodes = np.array(self.nodes, dtype=float, ndmin=1)
        if nodes.ndim != 1 or nodes.size < 2:
            raise DomainError("A mesh needs at least two nodes")
        if nodes[0] != -1.0 or nodes[-1] != 1.0:
            raise DomainError(
                f"Mesh must start at -1 and end at 1, got {nodes[0]} and "
                f"{nodes[-1]}")
        if np.any(np.diff(nodes) <= 0):
            raise DomainError(f"Mesh nodes must increase: {nodes.tolist()}")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    def __repr__(self) -> str:
        return f"Mesh({self.nodes.tolist()})"

    def __eq__(self, other: Any) -> bool:
        return (isinstance(other, Mesh) and
                np.array_equal(self.nodes, other.nodes))

    def __hash__(self) -> int:
        return hash(tuple(self.nodes))

    @property
    def num_elements(self) -> int:
        return self.nodes.size - 1

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.nodes)

    def element(self, j: int) -> tuple:
        """(x_{j}, x_{j+1}) for the 0-based element index j."""
        return float(self.nodes[j]), float(self.nodes[j + 1])

    def locate(self, x: Any) -> np.ndarray:
        """
        0-based element index of every point; nodes belong to the element
        on their right except x = 1.
        """
        x = np.asarray(x, dtype=float)
        index = np.searchsorted(self.nodes, x, side="right") - 1
        return np.clip(index, 0, self.num_elements - 1)

    def to_reference(self, x: Any, index: Any) -> np.ndarray:
        """Maps x in element index to s in [-1, 1]."""
        a = self.nodes[index]
        b = self.nodes[np.asarray(index) + 1]
        return (2.0 * np.asarray(x, dtype=float) - a - b) / (b - a)

    def to_json(self) -> list:
        return self.nodes.tolist()
