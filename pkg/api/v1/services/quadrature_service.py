#!/usr/bin/env python3
"""
Composite Gauss-Legendre quadrature refined geometrically toward both
walls of (-1, 1), so integrands with boundary layers of width eps are
resolved.

Functions:
    - layer_adapted_quadrature: The composite rule.
    - integrate: Integral of a vectorized function with a rule.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import legendre

from config import Config
from models.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadratureRule:
    """
    Nodes and weights of a composite rule.

    Attributes:
        nodes, weights (np.ndarray): Flattened over all panels.
        edges (np.ndarray): Panel edges, -1 to 1.
        order (int): Points per panel.
    """
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    edges: np.ndarray = field(repr=False)
    order: int = 0

    @property
    def panels(self) -> int:
        return self.edges.size - 1

    def integrate(self, values: Any) -> float:
        """sum_i w_i values_i for values sampled at the nodes."""
        return float(self.weights @ np.asarray(values, dtype=float))


def _geometric_edges(epsilon: float, max_panels: int) -> np.ndarray:
    """Edges -1, -1 + w, -1 + 2w, -1 + 4w, ... with w = eps/10, up to 0."""
    offsets = [0.0]
    step = epsilon / 10.0
    while step < 1.0 and len(offsets) < max_panels:
        offsets.append(step)
        step *= 2.0
    left = -1.0 + np.array(offsets)
    return np.unique(np.concatenate([left, [0.0], -left[::-1]]))


def layer_adapted_quadrature(epsilon: float,
                             breakpoints: Optional[Sequence[float]] = None,
                             order: Optional[int] = None,
                             max_panels: Optional[int] = None,
                             refine: int = 1) -> QuadratureRule:
    """
    Composite Gauss-Legendre rule on (-1, 1).

    Panels start at width eps/10 at each wall and double toward the
    middle (at most max_panels per side). Extra breakpoints, typically
    the mesh nodes of a piecewise polynomial, are added as panel edges.
    refine > 1 splits every panel into that many equal parts.

    Args:
        epsilon (float): Layer width in (0, 1].
        breakpoints: Additional panel edges in (-1, 1).
        order (int, optional): Points per panel, Config.QUADRATURE_ORDER.
        max_panels (int, optional): Geometric panels per side,
            Config.QUADRATURE_MAX_PANELS.
        refine (int): Subdivision factor.

    Raises:
        DomainError: If eps is not in (0, 1].
    """
    if not 0.0 < epsilon <= 1.0:
        raise DomainError(f"Invalid epsilon: {epsilon}. Must be in (0, 1]")
    order = order or Config.QUADRATURE_ORDER
    max_panels = max_panels or Config.QUADRATURE_MAX_PANELS
    edges = _geometric_edges(epsilon, max_panels)
    if breakpoints is not None:
        extra = np.asarray(breakpoints, dtype=float)
        edges = np.union1d(edges, extra[np.abs(extra) < 1.0])
    if refine > 1:
        fractions = np.arange(refine) / refine
        starts = edges[:-1, None] + np.diff(edges)[:, None] * fractions
        edges = np.append(starts.ravel(), 1.0)
    s, w = legendre.leggauss(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * s).ravel()
    weights = (half[:, None] * w).ravel()
    return QuadratureRule(nodes, weights, edges, order)


def integrate(fn: Callable[[np.ndarray], np.ndarray],
              rule: QuadratureRule) -> float:
    return rule.integrate(fn(rule.nodes))
