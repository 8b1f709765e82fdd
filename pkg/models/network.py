#!/usr/bin/env python3
"""
Holds the Network class: a strict feed-forward neural network given as a
finite sequence of (weight matrix, bias vector) tuples together with the
activation used in its hidden layers.

The realization applies the activation after every layer except the last.
Evaluation propagates first derivatives alongside values (forward mode), so
every call returns both the output and the Jacobian with respect to the
input. Hidden values of tanh and sigmoid layers are passed on as an exact
offset plus a residual (Activation.centered), so a saturated neuron whose
level is cancelled by the next bias keeps its relative accuracy.

Classes:
    - Layer: One (A, b) tuple.
    - EvalResult: Output values and Jacobians of a realization.
    - Network: The stored network model.

Functions:
    - realize(net, x): Module-level alias of Network.realize.
"""
from dataclasses import dataclass
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from models.activation import Activation
from models.base_model import BaseModel, time_format
from models.errors import InputShapeError, NumericOverflowError

# Layers at least this large and at most this dense are applied as CSR
# matrices during evaluation. Storage stays dense.
_SPARSE_MIN_ENTRIES = 4096
_SPARSE_MAX_DENSITY = 0.25


class Layer(NamedTuple):
    """One affine map x -> A x + b."""
    A: np.ndarray
    b: np.ndarray


@dataclass(frozen=True)
class EvalResult:
    """
    Result of realizing a network.

    For a single input point value has shape (N_L,) and jacobian
    (N_L, d); for a batch of n points both gain a leading axis of length n.
    """
    value: np.ndarray
    jacobian: np.ndarray


def _frozen(array: Any, ndim: int) -> np.ndarray:
    out = np.array(array, dtype=float, copy=True, ndmin=ndim)
    out.setflags(write=False)
    return out


class Network(BaseModel):
    """
    A strict feed-forward network.

    Attributes:
        layers (tuple of Layer): The affine maps, first to last.
        activation (Activation): Applied componentwise in layers 1..L-1.
    """

    def __init__(self, layers: Sequence[Tuple[Any, Any]],
                 activation: "Activation | str", *args: Any,
                 **kwargs: Any) -> None:
        """
        Validates and freezes the layer arrays.

        Args:
            layers: Sequence of (A, b) pairs or {"A", "b"} dicts.
            activation: Activation instance or registered name.
            **kwargs: Forwarded to BaseModel (id, created_at).

        Raises:
            InputShapeError: On an empty layer list or incompatible shapes.
            NumericOverflowError: If any weight or bias is not finite.
        """
        super().__init__(*args, **kwargs)
        if not layers:
            raise InputShapeError("A network needs at least one layer")
        frozen: List[Layer] = []
        for index, layer in enumerate(layers):
            if isinstance(layer, dict):
                A, b = layer["A"], layer["b"]
            else:
                A, b = layer
            A = _frozen(A, 2)
            b = _frozen(b, 1)
            if A.ndim != 2 or b.ndim != 1 or A.shape[0] != b.shape[0]:
                raise InputShapeError(
                    f"Layer {index + 1}: weight shape {A.shape} does not "
                    f"match bias shape {b.shape}")
            if frozen and frozen[-1].A.shape[0] != A.shape[1]:
                raise InputShapeError(
                    f"Layer {index + 1} expects {A.shape[1]} inputs but "
                    f"layer {index} has {frozen[-1].A.shape[0]} outputs")
            if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
                raise NumericOverflowError(
                    f"Layer {index + 1} contains non-finite parameters")
            frozen.append(Layer(A, b))
        self.layers: Tuple[Layer, ...] = tuple(frozen)
        self.activation: Activation = Activation.from_str(activation)
        self._operators: Optional[List[Any]] = None

    # Structure

    @property
    def depth(self) -> int:
        """Number of affine layers L."""
        return len(self.layers)

    @property
    def size(self) -> int:
        """Number of nonzero weights and biases M."""
        return int(sum(np.count_nonzero(layer.A) + np.count_nonzero(layer.b)
                       for layer in self.layers))

    @property
    def input_dim(self) -> int:
        return int(self.layers[0].A.shape[1])

    @property
    def output_dim(self) -> int:
        return int(self.layers[-1].A.shape[0])

    @property
    def widths(self) -> List[int]:
        """[N_0, N_1, ..., N_L]."""
        return [self.input_dim] + [int(layer.A.shape[0])
                                   for layer in self.layers]

    @property
    def hidden_layers(self) -> Tuple[Layer, ...]:
        return self.layers[:-1]

    # Evaluation

    def _linear_operators(self) -> List[Any]:
        if self._operators is None:
            operators = []
            for layer in self.layers:
                A = layer.A
                if (A.size >= _SPARSE_MIN_ENTRIES and
                        np.count_nonzero(A) <= _SPARSE_MAX_DENSITY * A.size):
                    operators.append(sparse.csr_matrix(A))
                else:
                    operators.append(A)
            self._operators = operators
        return self._operators

    def realize(self, x: Any) -> EvalResult:
        """
        Evaluates the network and its Jacobian.

        Args:
            x: One input point of shape (d,) or a batch of shape (n, d).
                A scalar is accepted for d = 1.

        Returns:
            EvalResult: values and Jacobians (see EvalResult).

        Raises:
            InputShapeError: If the trailing dimension is not N_0.
        """
        x = np.asarray(x, dtype=float)
        single = x.ndim <= 1
        if x.ndim == 0:
            x = x.reshape(1, 1)
        elif x.ndim == 1:
            x = x.reshape(1, -1)
        if x.ndim != 2 or x.shape[1] != self.input_dim:
            raise InputShapeError(
                f"Expected inputs of dimension {self.input_dim}, "
                f"got array of shape {x.shape}")
        n, d = x.shape
        h = x.T
        # tangent[:, k, :] is the derivative of h along input direction k
        tangent = np.broadcast_to(np.eye(d)[:, :, None], (d, d, n))
        act = self.activation
        operators = self._linear_operators()
        last = len(self.layers) - 1
        offset = None
        for index, (layer, op) in enumerate(zip(self.layers, operators)):
            width = layer.A.shape[0]
            shift = layer.b[:, None]
            if offset is not None:
                # exact offsets meet the bias before any residual
                shift = op @ offset + shift
            z = op @ h + shift
            t = (op @ tangent.reshape(tangent.shape[0], d * n)
                 ).reshape(width, d, n)
            if index < last:
                offset, h = act.centered(z)
                tangent = t * act.d1(z)[:, None, :]
            else:
                h, tangent = z, t
        value = np.asarray(h).T
        jacobian = np.asarray(tangent).transpose(2, 0, 1)
        if single:
            return EvalResult(value[0], jacobian[0])
        return EvalResult(value, jacobian)

    def scalar(self, x: Any) -> Tuple[np.ndarray, np.ndarray]:
        """
        Evaluates a network with one input and one output on a 1-D grid.

        Args:
            x: Array of n input points.

        Returns:
            tuple: (values, derivatives), each of shape (n,).
        """
        if self.input_dim != 1 or self.output_dim != 1:
            raise InputShapeError(
                f"scalar() needs a 1-in 1-out network, got "
                f"{self.input_dim}-in {self.output_dim}-out")
        x = np.atleast_1d(np.asarray(x, dtype=float))
        result = self.realize(x.reshape(-1, 1))
        return result.value[:, 0], result.jacobian[:, 0, 0]

    def __call__(self, x: Any) -> np.ndarray:
        """Values only; see realize."""
        return self.realize(x).value

    # Serialization

    def __str__(self) -> str:
        """
        Returns a string representation of the Network instance.

        The string format is:
        [Network] (ID) activation, widths, depth, size
        """
        return (f"[Network] ({self.id}) {self.activation.name} "
                f"widths={self.widths} depth={self.depth} size={self.size}")

    def __repr__(self) -> str:
        return (f"Network(id={self.id}, activation={self.activation.name}, "
                f"widths={self.widths}, created_at={self.created_at})")

    def to_json(self, for_serialization: bool = False) -> dict:
        """
        Convert the network to its interchange dictionary.

        Returns:
            dict: {"id", "created_at", "activation", "depth", "size",
            "layers": [{"A", "b"}]}.
        """
        result = {
            "id": self.id,
            "created_at": self.created_at.strftime(time_format),
            "activation": self.activation.name,
            "depth": self.depth,
            "size": self.size,
            "layers": [{"A": layer.A.tolist(), "b": layer.b.tolist()}
                       for layer in self.layers],
        }
        if for_serialization:
            result["__class__"] = "Network"
        return result

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "Network":
        """
        Rebuilds a network from its interchange dictionary.

        Unknown keys (depth, size) are ignored.
        """
        kwargs = {k: data[k] for k in ("id", "created_at") if k in data}
        return cls(data["layers"], data["activation"], **kwargs)

    def same_hidden_layers(self, other: "Network") -> bool:
        """True when both networks share every hidden (A, b) exactly."""
        if self.depth != other.depth:
            return False
        return all(np.array_equal(a.A, b.A) and np.array_equal(a.b, b.b)
                   for a, b in zip(self.hidden_layers, other.hidden_layers))


def realize(net: Network, x: Any) -> EvalResult:
    """Evaluates net at x; see Network.realize."""
    return net.realize(x)
