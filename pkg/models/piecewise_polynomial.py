#!/usr/bin/env python3
"""
Holds the PiecewisePolynomial class: a continuous function that is a
polynomial of degree p on every element of a mesh, stored as one Chebyshev
coefficient vector per element on the reference element [-1, 1].

Classes:
    - PiecewisePolynomial: Stored member of the space S^p(mesh).
"""
from typing import Any, Dict, Tuple

import numpy as np
from numpy.polynomial import chebyshev as C

from models.base_model import BaseModel, time_format
from models.cheb_expansion import ChebExpansion
from models.errors import DomainError, InputShapeError
from models.mesh import Mesh

# Points this far outside [-1, 1] are still accepted as the endpoint.
_BOUNDARY_SLACK = 1e-12


class PiecewisePolynomial(BaseModel):
    """
    Continuous piecewise polynomial on a mesh.

    Attributes:
        mesh (Mesh): The partition.
        coefficients (np.ndarray): Shape (N, p+1); row j holds the
            Chebyshev coefficients of the restriction to element j,
            pulled back to [-1, 1].
    """

    def __init__(self, mesh: "Mesh | Any", coefficients: Any,
                 *args: Any, **kwargs: Any) -> None:
        super().__init__(*args, **kwargs)
        self.mesh = mesh if isinstance(mesh, Mesh) else Mesh(mesh)
        coefficients = np.array(coefficients, dtype=float, ndmin=2)
        if coefficients.shape[0] != self.mesh.num_elements:
            raise InputShapeError(
                f"Expected {self.mesh.num_elements} coefficient rows, got "
                f"{coefficients.shape[0]}")
        coefficients.setflags(write=False)
        self.coefficients = coefficients
        self._derivatives = [C.chebder(row) if row.size > 1
                             else np.zeros(1) for row in coefficients]

    @property
    def degree(self) -> int:
        return self.coefficients.shape[1] - 1

    def element_expansion(self, j: int) -> ChebExpansion:
        """Chebyshev expansion of element j on the reference element."""
        return ChebExpansion(self.coefficients[j])

    def evaluate(self, x: Any) -> Tuple[np.ndarray, np.ndarray]:
        """
        Values and derivatives at x.

        Args:
            x: Points in [-1, 1].

        Returns:
            tuple: (values, derivatives) with the shape of x.

        Raises:
            DomainError: If a point lies outside [-1, 1].
        """
        x = np.asarray(x, dtype=float)
        if np.any(np.abs(x) > 1.0 + _BOUNDARY_SLACK):
            raise DomainError("Piecewise polynomials live on [-1, 1]")
        flat = np.clip(x.ravel(), -1.0, 1.0)
        index = self.mesh.locate(flat)
        s = self.mesh.to_reference(flat, index)
        values = np.empty_like(flat)
        derivs = np.empty_like(flat)
        widths = self.mesh.widths
        for j in np.unique(index):
            mask = index == j
            values[mask] = C.chebval(s[mask], self.coefficients[j])
            derivs[mask] = (C.chebval(s[mask], self._derivatives[j]) *
                            2.0 / widths[j])
        return values.reshape(x.shape), derivs.reshape(x.shape)

    def __call__(self, x: Any) -> np.ndarray:
        return self.evaluate(x)[0]

    def node_values(self) -> np.ndarray:
        """Left and right limits at every node, shape (N+1, 2)."""
        left = np.array([C.chebval(1.0, row) for row in self.coefficients])
        right = np.array([C.chebval(-1.0, row) for row in self.coefficients])
        out = np.empty((self.mesh.num_elements + 1, 2))
        out[0] = right[0]
        out[-1] = left[-1]
        out[1:-1, 0] = left[:-1]
        out[1:-1, 1] = right[1:]
        return out

    def continuity_defect(self) -> float:
        """Largest jump at an interior node."""
        values = self.node_values()
        return float(np.max(np.abs(values[:, 0] - values[:, 1])))

    @property
    def has_zero_trace(self) -> bool:
        values = self.node_values()
        return bool(abs(values[0, 1]) <= 1e-10 and abs(values[-1, 0]) <= 1e-10)

    def __str__(self) -> str:
        return (f"[PiecewisePolynomial] ({self.id}) degree={self.degree} "
                f"nodes={self.mesh.nodes.tolist()}")

    def to_json(self, for_serialization: bool = False) -> dict:
        """
        Returns:
            dict: {"id", "created_at", "nodes", "coefficients"}.
        """
        result = {
            "id": self.id,
            "created_at": self.created_at.strftime(time_format),
            "nodes": self.mesh.nodes.tolist(),
            "coefficients": self.coefficients.tolist(),
        }
        if for_serialization:
            result["__class__"] = "PiecewisePolynomial"
        return result

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "PiecewisePolynomial":
        kwargs = {k: data[k] for k in ("id", "created_at") if k in data}
        return cls(data["nodes"], data["coefficients"], **kwargs)
