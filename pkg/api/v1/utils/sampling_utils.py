#!/usr/bin/env python3
"""
Sampling Utility Module.

Point sets used to measure sup-norm errors and to test networks.

Functions:
    - layer_clustered_points: Uniform points plus points uniform in the
      stretched variables (1 -+ x)/eps near both walls.
    - random_points: Seeded uniform random points in a box.
    - as_evaluator: (values, derivatives) callable for networks,
      piecewise polynomials and reference solutions.
"""
from typing import Any, Callable, Optional, Tuple

import numpy as np

from config import Config

# Stretched distance from a wall covered by the clustered points.
LAYER_SPAN = 20.0


def layer_clustered_points(epsilon: float,
                           samples: Optional[int] = None) -> np.ndarray:
    """
    Sorted points in [-1, 1] resolving boundary layers of width eps.

    A third of the points is uniform on [-1, 1]; the rest is split
    between both walls, uniform in (1 -+ x)/eps on [0, LAYER_SPAN] (capped
    at the interval).

    Args:
        epsilon (float): Layer width.
        samples (int, optional): Total count; defaults to
            Config.LINF_SAMPLES.

    Returns:
        np.ndarray: Unique sorted points including +-1.
    """
    samples = samples or Config.LINF_SAMPLES
    uniform = np.linspace(-1.0, 1.0, max(samples // 3, 2))
    span = min(LAYER_SPAN * epsilon, 2.0)
    stretched = np.linspace(0.0, span, max(samples // 3, 2))
    return np.unique(np.concatenate([uniform, -1.0 + stretched,
                                     1.0 - stretched]))


def random_points(box: Tuple[float, float], count: int, dim: int = 1,
                  seed: Optional[int] = None) -> np.ndarray:
    """
    Returns:
        np.ndarray: Shape (count, dim), uniform in box^dim.
    """
    rng = np.random.default_rng(Config.DEFAULT_SEED if seed is None
                                else seed)
    return rng.uniform(box[0], box[1], size=(count, dim))


def as_evaluator(approx: Any) -> Callable[[np.ndarray],
                                          Tuple[np.ndarray, np.ndarray]]:
    """
    Wraps approx as x -> (values, derivatives) on 1-D grids.

    Networks use Network.scalar; anything else must provide evaluate(x).

    Raises:
        TypeError: If approx has neither scalar nor evaluate.
    """
    if hasattr(approx, "scalar"):
        return approx.scalar
    if hasattr(approx, "evaluate"):
        return approx.evaluate
    raise TypeError(f"Cannot evaluate {type(approx).__name__}")
