#!/usr/bin/env python3
"""
Holds the SpikingNetwork class: a feed-forward network of
integrate-and-fire neurons that encode values in spike times.

Layer l has weights J_l, thresholds theta_l, slopes alpha_l and a time
window [t_min_l, t_max_l] with t_min_l = t_max_{l-1}. The input layer
spikes in [0, 1]. The output layer has no threshold: its value is the
membrane voltage at the end of its window.

Classes:
    - RescaleParams: Constants of the ReLU weight rescaling.
    - SpikingLayer: One layer's parameters.
    - SpikingNetwork: The stored network model.
"""
from dataclasses import dataclass
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from config import Config
from models.base_model import BaseModel, time_format
from models.errors import DomainError, InputShapeError, InvariantError


@dataclass(frozen=True)
class RescaleParams:
    """
    Constants of the rescaling that precedes the spiking conversion.

    Attributes:
        delta (float): Hidden row sums are kept <= 1 - delta; in (0, 1).
        bound (float): Hidden row sums are kept >= -bound; > 0.
        input_box (tuple): (x_min, x_max), x_min < x_max.
    """
    delta: float = Config.SNN_DELTA
    bound: float = Config.SNN_BOUND
    input_box: Tuple[float, float] = (-1.0, 1.0)

    def __post_init__(self) -> None:
        if not 0.0 < self.delta < 1.0:
            raise DomainError(
                f"Invalid delta: {self.delta}. Must be in (0, 1)")
        if not self.bound > 0.0:
            raise DomainError(f"Invalid bound: {self.bound}. Must be > 0")
        x_min, x_max = self.input_box
        if not x_min < x_max:
            raise DomainError(
                f"Invalid input box: {self.input_box}. Need x_min < x_max")
        object.__setattr__(self, "input_box", (float(x_min), float(x_max)))

    @property
    def width(self) -> float:
        return self.input_box[1] - self.input_box[0]


def _frozen(array: Any) -> np.ndarray:
    out = np.array(array, dtype=float, copy=True, ndmin=1)
    out.setflags(write=False)
    return out


class SpikingLayer(NamedTuple):
    """Parameters of one spiking layer; theta is None for the output."""
    J: np.ndarray
    theta: Optional[np.ndarray]
    alpha: np.ndarray
    t_min: float
    t_max: float


class SpikingNetwork(BaseModel):
    """
    Spiking network produced by the ReLU conversion.

    Attributes:
        layers (tuple of SpikingLayer): Hidden layers then the output.
        input_box (tuple): (x_min, x_max) of the ReLU inputs it encodes.
        range_exact (bool): Whether the window lengths are exact maxima
            (False when they come from a sampled bound).
    """

    def __init__(self, layers: Sequence[Any],
                 input_box: Tuple[float, float] = (0.0, 1.0),
                 range_exact: bool = True, *args: Any,
                 **kwargs: Any) -> None:
        """
        Raises:
            InputShapeError: On incompatible layer shapes.
            InvariantError: If the windows are not chained.
        """
        super().__init__(*args, **kwargs)
        built: List[SpikingLayer] = []
        for index, layer in enumerate(layers):
            if isinstance(layer, dict):
                layer = SpikingLayer(layer["J"], layer.get("theta"),
                                     layer["alpha"], layer["t_min"],
                                     layer["t_max"])
            J = np.array(layer.J, dtype=float, ndmin=2)
            J.setflags(write=False)
            theta = None if layer.theta is None else _frozen(layer.theta)
            alpha = _frozen(layer.alpha)
            if alpha.shape[0] != J.shape[0] or (
                    theta is not None and theta.shape[0] != J.shape[0]):
                raise InputShapeError(
                    f"Spiking layer {index + 1}: J has {J.shape[0]} rows "
                    f"but alpha/theta have other lengths")
            if built and built[-1].J.shape[0] != J.shape[1]:
                raise InputShapeError(
                    f"Spiking layer {index + 1} expects {J.shape[1]} "
                    f"inputs, got {built[-1].J.shape[0]}")
            built.append(SpikingLayer(J, theta, alpha, float(layer.t_min),
                                      float(layer.t_max)))
        if not built:
            raise InputShapeError("A spiking network needs a layer")
        previous_max = 1.0
        for index, layer in enumerate(built):
            if layer.t_min != previous_max or layer.t_max < layer.t_min:
                raise InvariantError(
                    f"Spiking layer {index + 1} window "
                    f"[{layer.t_min}, {layer.t_max}] does not follow "
                    f"t_max={previous_max}")
            previous_max = layer.t_max
        self.layers: Tuple[SpikingLayer, ...] = tuple(built)
        self.input_box = (float(input_box[0]), float(input_box[1]))
        self.range_exact = bool(range_exact)

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def size(self) -> int:
        """Number of nonzero synaptic weights."""
        return int(sum(np.count_nonzero(layer.J) for layer in self.layers))

    @property
    def input_dim(self) -> int:
        return int(self.layers[0].J.shape[1])

    @property
    def output_dim(self) -> int:
        return int(self.layers[-1].J.shape[0])

    def encode(self, x: Any) -> np.ndarray:
        """Input spike times t0 = 1 - (x - x_min) / (x_max - x_min)."""
        x_min, x_max = self.input_box
        return 1.0 - (np.asarray(x, dtype=float) - x_min) / (x_max - x_min)

    def __str__(self) -> str:
        return (f"[SpikingNetwork] ({self.id}) depth={self.depth} "
                f"size={self.size} t_end={self.layers[-1].t_max:.6g}")

    def to_json(self, for_serialization: bool = False) -> dict:
        """
        Returns:
            dict: {"id", "created_at", "input_box", "range_exact",
            "layers": [{"J", "theta", "alpha", "t_min", "t_max"}]}.
        """
        result = {
            "id": self.id,
            "created_at": self.created_at.strftime(time_format),
            "input_box": list(self.input_box),
            "range_exact": self.range_exact,
            "layers": [{"J": layer.J.tolist(),
                        "theta": (None if layer.theta is None
                                  else layer.theta.tolist()),
                        "alpha": layer.alpha.tolist(),
                        "t_min": layer.t_min,
                        "t_max": layer.t_max} for layer in self.layers],
        }
        if for_serialization:
            result["__class__"] = "SpikingNetwork"
        return result

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "SpikingNetwork":
        kwargs = {k: data[k] for k in ("id", "created_at") if k in data}
        return cls(data["layers"], tuple(data.get("input_box", (0.0, 1.0))),
                   data.get("range_exact", True), **kwargs)
