#!/usr/bin/env python3
"""
Conversion of ReLU networks into spiking networks with time-to-first-spike
coding, and their exact simulation.

The conversion first rescales the ReLU network (positive homogeneity of
ReLU) so that every hidden row sum lies in [-B, 1 - delta], then turns
layer l into integrate-and-fire neurons with window length X_l, the
maximum of that layer's ReLU outputs over the input box. A ReLU output y
of a hidden neuron corresponds to the spike time t_max_l - y.

Between spikes the voltage is piecewise linear in time, so simulation is
closed form: once all inputs of a layer have spiked the voltage is linear
and its threshold crossing is computed directly.

Classes:
    - PwLinear1D: Continuous piecewise linear map on an interval.
    - RangeResult: Range of a network over its input box.
    - EquivalenceReport: Deviation between a ReLU net and its SNN.

Functions:
    - rescale_relu: Row-sum rescaling of a ReLU network.
    - exact_range_1d: Range of a ReLU network by breakpoint propagation.
    - layer_maxima: X_l for every hidden layer.
    - convert: ReLU network to spiking network.
    - simulate: Output of a spiking network for input spike times.
    - verify_equivalence: Sampled comparison of both realizations.
"""
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from api.v1.utils.sampling_utils import random_points
from config import Config
from models.errors import DomainError, InputShapeError, InvariantError
from models.network import Layer, Network
from models.spiking_network import (RescaleParams, SpikingLayer,
                                    SpikingNetwork)

logger = logging.getLogger(__name__)


class _TooManyPieces(Exception):
    """
    Breakpoint propagation exceeded its cap.

    Attributes:
        breakpoints (np.ndarray): Breakpoints reached before the cap.
        outputs (list): Exact outputs of the layers completed so far.
    """

    def __init__(self, pieces: int, breakpoints: np.ndarray,
                 outputs: List[np.ndarray]) -> None:
        super().__init__(pieces)
        self.breakpoints = breakpoints
        self.outputs = outputs


@dataclass(frozen=True)
class PwLinear1D:
    """
    Continuous piecewise linear map given by its values at breakpoints.

    Attributes:
        breakpoints (np.ndarray): Sorted, shape (n,).
        values (np.ndarray): Shape (n, outputs).
    """
    breakpoints: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    @property
    def pieces(self) -> int:
        return self.breakpoints.size - 1

    @property
    def slopes(self) -> np.ndarray:
        """Shape (pieces, outputs)."""
        return (np.diff(self.values, axis=0) /
                np.diff(self.breakpoints)[:, None])

    def __call__(self, x: Any) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.stack([np.interp(x, self.breakpoints, column)
                         for column in self.values.T], axis=-1)


@dataclass(frozen=True)
class RangeResult:
    """
    Range of a network over its input box.

    When exact is False, minimum and maximum are attained sample values
    and upper is a bound on the true maximum (sample maximum enlarged by
    the configured margin, or a Lipschitz bound for d > 1).
    """
    minimum: float
    maximum: float
    piecewise: Optional[PwLinear1D] = None
    exact: bool = True
    upper: Optional[float] = None

    @property
    def bound(self) -> float:
        """A value >= the maximum: exact maximum or upper bound."""
        return self.maximum if self.upper is None else self.upper


@dataclass
class EquivalenceReport:
    """Sampled deviation between R(net)(x) and simulate(snn, t0(x))."""
    samples: int
    max_abs: float
    max_rel: float
    relu_size: int
    snn_size: int
    depth: int
    windows: List[Tuple[float, float]] = field(default_factory=list)
    range_exact: bool = True

    def to_json(self) -> Dict[str, Any]:
        return asdict(self)


def _check_relu(net: Network) -> None:
    if not net.activation.is_relu:
        raise DomainError(
            f"Invalid activation: {net.activation.name}. Spiking conversion "
            f"needs a relu network")


def rescale_relu(net: Network,
                 params: Optional[RescaleParams] = None) -> Network:
    """
    Rescaled network taking x_bar = (x - x_min)/(x_max - x_min) in [0, 1].

    The first layer absorbs the input box. Then, layer by layer, a hidden
    row i with sum c > 1 - delta is multiplied by (1 - delta)/c and the
    next layer's column i by c/(1 - delta); a row with c < -B is
    multiplied by B/|c| and the column by |c|/B.

    Args:
        net (Network): ReLU network.
        params (RescaleParams, optional): delta, B and the input box.

    Returns:
        Network: R(out)(x_bar) = R(net)(x); same shapes and zero pattern.
    """
    _check_relu(net)
    params = params or RescaleParams()
    x_min = params.input_box[0]
    A = [np.array(layer.A, dtype=float) for layer in net.layers]
    b = [np.array(layer.b, dtype=float) for layer in net.layers]
    b[0] = b[0] + x_min * A[0].sum(axis=1)
    A[0] = params.width * A[0]
    upper = 1.0 - params.delta
    for ell in range(net.depth - 1):
        c = A[ell].sum(axis=1)
        scale = np.ones_like(c)
        high = c > upper
        low = c < -params.bound
        scale[high] = upper / c[high]
        scale[low] = params.bound / np.abs(c[low])
        A[ell] *= scale[:, None]
        b[ell] *= scale
        A[ell + 1] /= scale[None, :]
    return Network([Layer(a, v) for a, v in zip(A, b)], "relu")


def _propagate(layers: Sequence[Layer], interval: Tuple[float, float],
               max_pieces: int) -> Tuple[np.ndarray, List[np.ndarray]]:
    """
    Breakpoints and values of every layer output on the interval.

    Hidden layers are returned after the activation.

    Raises:
        _TooManyPieces: If the breakpoint count exceeds max_pieces + 1;
            it carries the layers that were completed.
    """
    x = np.array(interval, dtype=float)
    h = x[:, None]
    outputs = []
    for index, layer in enumerate(layers):
        pre = h @ layer.A.T + layer.b
        if index == len(layers) - 1:
            outputs.append(pre)
            break
        left, right = pre[:-1], pre[1:]
        cross = (left * right) < 0
        if np.any(cross):
            piece, _ = np.nonzero(cross)
            frac = left[cross] / (left[cross] - right[cross])
            new_x = x[piece] + frac * (x[piece + 1] - x[piece])
            new_x = np.setdiff1d(np.unique(new_x), x)
            if x.size + new_x.size > max_pieces + 1:
                raise _TooManyPieces(x.size + new_x.size - 1, x, outputs)
            merged = np.union1d(x, new_x)
            # pre is linear between old breakpoints.
            pre = np.stack([np.interp(merged, x, column)
                            for column in pre.T], axis=1)
            h = np.stack([np.interp(merged, x, column)
                          for column in h.T], axis=1)
            outputs = [np.stack([np.interp(merged, x, column)
                                 for column in out.T], axis=1)
                       for out in outputs]
            x = merged
        h = np.maximum(pre, 0.0)
        outputs.append(h)
    return x, outputs


def _lipschitz(layers: Sequence[Layer]) -> float:
    """Product of the infinity norms of the weight matrices."""
    return float(np.prod([np.max(np.sum(np.abs(layer.A), axis=1))
                          for layer in layers]))


def _sampled_outputs(layers: Sequence[Layer], points: np.ndarray
                     ) -> List[np.ndarray]:
    h = points
    outputs = []
    for index, layer in enumerate(layers):
        pre = h @ layer.A.T + layer.b
        h = pre if index == len(layers) - 1 else np.maximum(pre, 0.0)
        outputs.append(h)
    return outputs


def _sample_grid(box: Tuple[float, float], dim: int, samples: int,
                 seed: Optional[int]) -> Tuple[np.ndarray, float]:
    """Uniform tensor grid plus random points; also the grid spacing."""
    per_axis = max(2, int(samples ** (1.0 / dim)))
    axis = np.linspace(box[0], box[1], per_axis)
    grid = np.stack(np.meshgrid(*[axis] * dim, indexing="ij"),
                    axis=-1).reshape(-1, dim)
    extra = random_points(box, samples, dim, seed)
    return np.vstack([grid, extra]), (box[1] - box[0]) / (per_axis - 1)


def exact_range_1d(net: Network,
                   interval: Tuple[float, float] = (0.0, 1.0),
                   max_pieces: Optional[int] = None,
                   seed: Optional[int] = None) -> RangeResult:
    """
    Minimum and maximum of a ReLU network over an interval.

    Affine layers keep the breakpoints; ReLU adds a breakpoint wherever a
    neuron changes sign between two breakpoints, so the extrema over the
    final breakpoint set are exact. Above max_pieces
    (Config.SNN_RANGE_MAX_PIECES) pieces, and for input dimension d > 1,
    sampled values are reported with exact=False: in 1-D the upper bound
    is the sample maximum times 1 + Config.SNN_RANGE_MARGIN, for d > 1 the
    grid maximum plus Lipschitz constant times half the grid spacing.
    """
    _check_relu(net)
    max_pieces = max_pieces or Config.SNN_RANGE_MAX_PIECES
    if net.input_dim == 1:
        try:
            x, outputs = _propagate(net.layers, interval, max_pieces)
        except _TooManyPieces as err:
            logger.warning("Range of %s exceeds %d pieces (%s); using a "
                           "sampled bound", net.id, max_pieces, err)
        else:
            values = outputs[-1]
            return RangeResult(float(values.min()), float(values.max()),
                               PwLinear1D(x, values))
    points, spacing = _sample_grid(interval, net.input_dim,
                                   Config.SNN_RANGE_SAMPLES, seed)
    values = _sampled_outputs(net.layers, points)[-1]
    low, high = float(values.min()), float(values.max())
    if net.input_dim == 1:
        upper = high + abs(high) * Config.SNN_RANGE_MARGIN
    else:
        upper = high + 0.5 * spacing * _lipschitz(net.layers)
    return RangeResult(low, high, None, False, upper)


def layer_maxima(net: Network, seed: Optional[int] = None
                 ) -> Tuple[List[float], bool]:
    """
    X_l = max over [0, 1]^d of the hidden outputs of layer l, l < L.

    In 1-D the layers that breakpoint propagation completes before the
    piece cap keep their exact maxima, and the breakpoints reached so far
    join the sample points of the remaining layers.

    Returns:
        tuple: (maxima, exact). Sampled maxima are enlarged by
        Config.SNN_RANGE_MARGIN and, for d > 1, by the Lipschitz term.
    """
    hidden = list(net.layers[:-1])
    if not hidden:
        return [], True
    exact: List[float] = []
    extra = np.empty((0, net.input_dim))
    if net.input_dim == 1:
        try:
            _, outputs = _propagate(net.layers, (0.0, 1.0),
                                    Config.SNN_RANGE_MAX_PIECES)
            return [float(out.max()) for out in outputs[:-1]], True
        except _TooManyPieces as err:
            exact = [float(out.max()) for out in err.outputs]
            extra = err.breakpoints[:, None]
            logger.warning("Hidden ranges of %s exceed %d pieces (%s) after "
                           "%d exact layers; sampling the rest", net.id,
                           Config.SNN_RANGE_MAX_PIECES, err, len(exact))
    points, spacing = _sample_grid((0.0, 1.0), net.input_dim,
                                   Config.SNN_RANGE_SAMPLES, seed)
    outputs = _sampled_outputs(hidden, np.vstack([points, extra]))
    maxima = list(exact)
    for ell, out in enumerate(outputs[len(exact):], start=len(exact)):
        high = float(out.max()) * (1.0 + Config.SNN_RANGE_MARGIN)
        if net.input_dim > 1:
            high += 0.5 * spacing * _lipschitz(hidden[:ell + 1])
        maxima.append(high)
    return maxima, False


def _window_end(t_min: float, length: float) -> float:
    """Smallest float t_max >= t_min + length with t_max - t_min >= length."""
    t_max = t_min + length
    while t_max - t_min < length:
        t_max = float(np.nextafter(t_max, np.inf))
    return t_max


def convert(net: Network,
            params: Optional[RescaleParams] = None,
            seed: Optional[int] = None) -> SpikingNetwork:
    """
    Spiking network S(net) with R(net)(x) = simulate(S(net), t0) for
    t0 = 1 - x_bar and every x in the input box.

    Hidden layer l gets window [t_max_{l-1}, t_max_{l-1} + X_l], slopes
    alpha = 1, weights J_ij = A_ij / (1 - sum_j A_ij) and thresholds
    theta_i = (t_max_l - t_min_{l-1}) + sum_j J_ij (t_max_l - t_min_l)
    - (1 + sum_j J_ij) b_i, with (A, b) the rescaled layer. The output
    layer keeps J = A and sets alpha = b / (t_max_{L-1} - t_min_{L-1}).

    Thresholds are formed from the window lengths t_max - t_min as
    simulate recovers them, never from differences of absolute times, so
    layers whose outputs the rescaling has made small keep their
    relative accuracy late in the run.

    Raises:
        DomainError: If net is not a ReLU network.
        InvariantError: If a denominator 1 - sum_j A_ij falls below delta.
    """
    params = params or RescaleParams()
    rescaled = rescale_relu(net, params)
    maxima, exact = layer_maxima(rescaled, seed)
    prev_max, prev_width = 1.0, 1.0
    layers = []
    for ell, layer in enumerate(rescaled.layers[:-1]):
        x_max = maxima[ell] if maxima[ell] > 0 else 1.0
        t_min = prev_max
        t_max = _window_end(t_min, x_max)
        width = t_max - t_min
        denominator = 1.0 - layer.A.sum(axis=1)
        if np.any(denominator < params.delta * (1.0 - 1e-9)):
            raise InvariantError(
                f"Layer {ell + 1}: row sum leaves 1 - sum < delta = "
                f"{params.delta} (min {denominator.min():.6g})")
        alpha = np.ones(layer.A.shape[0])
        J = alpha[:, None] * layer.A / denominator[:, None]
        row = J.sum(axis=1)
        theta = (alpha * (width + prev_width) + row * width -
                 (alpha + row) * layer.b)
        layers.append(SpikingLayer(J, theta, alpha, t_min, t_max))
        prev_max, prev_width = t_max, width
    last = rescaled.layers[-1]
    layers.append(SpikingLayer(last.A, None, last.b / prev_width,
                               prev_max, prev_max))
    snn = SpikingNetwork(layers, params.input_box, exact)
    logger.info("Converted %s: depth=%d relu_size=%d snn_size=%d "
                "t_end=%.6g exact=%s", net.id, snn.depth, net.size, snn.size,
                prev_max, exact)
    return snn


def simulate(snn: SpikingNetwork, t0: Any) -> np.ndarray:
    """
    Output voltages of snn for input spike times t0.

    In layer l the voltage from t_min_l on is
    V(t) = alpha (t - t_min_{l-1}) + sum_j J_ij (t - t_j). A hidden neuron
    fires at the first t >= t_min_l with V(t) >= theta, or at t_max_l if
    there is none. The output is V_L at t_max_L.

    Spike times are carried as t_max_l - t, the time left in their
    window, and crossings as offsets from t_min_l; absolute times never
    enter the arithmetic.

    Args:
        snn (SpikingNetwork): The network.
        t0: Shape (d,) or (n, d), spike times in [0, 1].

    Returns:
        np.ndarray: Shape (N_L,) or (n, N_L).

    Raises:
        InputShapeError: If t0 does not have d columns.
        InvariantError: If a spike time is not finite.
    """
    times = np.asarray(t0, dtype=float)
    single = times.ndim <= 1
    times = np.atleast_2d(times) if times.ndim else times.reshape(1, 1)
    if single and snn.input_dim == 1 and times.shape[1] != 1:
        times = times.reshape(-1, 1)
        single = False
    if times.shape[1] != snn.input_dim:
        raise InputShapeError(
            f"Expected spike times with {snn.input_dim} columns, got "
            f"shape {times.shape}")
    left = 1.0 - times
    prev_width = 1.0
    for ell, layer in enumerate(snn.layers):
        v0 = layer.alpha * prev_width + left @ layer.J.T
        if layer.theta is None:
            return v0[0] if single else v0
        width = layer.t_max - layer.t_min
        slope = layer.alpha + layer.J.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            offset = np.where(slope > 0, (layer.theta - v0) / slope, width)
        offset = np.where(v0 >= layer.theta, 0.0, offset)
        if not np.all(np.isfinite(offset)):
            raise InvariantError(f"Layer {ell + 1} produced non-finite "
                                 f"spike times")
        left = width - np.clip(offset, 0.0, width)
        prev_width = width
    raise InvariantError("Spiking network has no output layer")


def verify_equivalence(net: Network, snn: SpikingNetwork,
                       samples: int = 1000,
                       seed: Optional[int] = None) -> EquivalenceReport:
    """
    Compares R(net)(x) with simulate(snn, 1 - x_bar) at seeded random
    points of the input box (plus its endpoints for d = 1).

    max_rel is max |difference| / (1 + |R(net)(x)|).
    """
    x = random_points(snn.input_box, samples, snn.input_dim, seed)
    if snn.input_dim == 1:
        x = np.vstack([x, [[snn.input_box[0]], [snn.input_box[1]]]])
    relu = net.realize(x).value
    spiking = simulate(snn, snn.encode(x))
    diff = np.abs(relu - spiking)
    report = EquivalenceReport(
        samples=int(x.shape[0]),
        max_abs=float(diff.max()),
        max_rel=float((diff / (1.0 + np.abs(relu))).max()),
        relu_size=net.size, snn_size=snn.size, depth=snn.depth,
        windows=[(layer.t_min, layer.t_max) for layer in snn.layers],
        range_exact=snn.range_exact)
    if not math.isfinite(report.max_rel) or report.max_rel > 1e-8:
        logger.warning("SNN deviation %.3e for %s", report.max_rel, net.id)
    return report
