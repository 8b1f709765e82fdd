#!/usr/bin/env python3
"""
Holds the Activation type: a named scalar nonlinearity with evaluators for
its first and second derivatives.

The three built-in activations are module-level singletons (RELU, TANH,
SIGMOID). Custom C^2 activations are created with Activation.custom and
registered by name so serialized networks can refer to them.

Derivative evaluators are written to stay accurate for large |z|: tanh'
uses exp(-2|z|) instead of 1 - tanh(z)^2, and the sigmoid family is built
on scipy.special.expit. For the same reason tanh and sigmoid carry a
split into an exact offset (a saturation level or the midpoint) and a
residual, which Network.realize uses to keep saturated neurons accurate.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from scipy.special import expit

ArrayFn = Callable[[np.ndarray], np.ndarray]
SplitFn = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]


class ActivationKind(Enum):
    """Families of activation functions."""
    RELU = "relu"
    TANH = "tanh"
    SIGMOID = "sigmoid"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class Activation:
    """
    A scalar activation function applied componentwise in hidden layers.

    Attributes:
        name (str): Registry name, used in the network interchange format.
        kind (ActivationKind): Family of the activation.
        fn: Vectorized activation.
        d1: Vectorized first derivative (ReLU'(0) = 0).
        d2: Vectorized second derivative, or None if unavailable.
        domain (tuple): Open interval on which the function is C^2.
        split: Optional map z -> (offset, residual) with fn = offset +
            residual; see centered.
    """
    name: str
    kind: ActivationKind
    fn: ArrayFn = field(repr=False)
    d1: ArrayFn = field(repr=False)
    d2: Optional[ArrayFn] = field(default=None, repr=False)
    domain: Tuple[float, float] = (-np.inf, np.inf)
    split: Optional[SplitFn] = field(default=None, repr=False)

    @property
    def is_relu(self) -> bool:
        return self.kind is ActivationKind.RELU

    def centered(self, z: np.ndarray
                 ) -> Tuple[Optional[np.ndarray], np.ndarray]:
        """
        Evaluates the activation as offset + residual.

        Offsets are exactly representable constants, so a following
        affine layer can fold them into its bias without rounding and
        only the residual carries the dependence on z. Activations
        without a split return (None, fn(z)).
        """
        if self.split is None:
            return None, self.fn(z)
        return self.split(z)

    def __str__(self) -> str:
        return self.name

    @classmethod
    def from_str(cls, value: "str | Activation") -> "Activation":
        """
        Looks up a registered activation by name (case-insensitive).

        Args:
            value: Activation name or an Activation instance.

        Returns:
            Activation: The registered activation.

        Raises:
            ValueError: If no activation with that name is registered.
        """
        if isinstance(value, Activation):
            return value
        key = str(value).strip().lower()
        if key not in _REGISTRY:
            raise ValueError(
                f"Invalid activation: {value}. "
                f"Must be one of {sorted(_REGISTRY)}")
        return _REGISTRY[key]

    @classmethod
    def custom(cls, name: str, fn: ArrayFn, d1: ArrayFn,
               d2: Optional[ArrayFn] = None,
               domain: Tuple[float, float] = (-np.inf, np.inf)
               ) -> "Activation":
        """
        Creates and registers a custom activation.

        Args:
            name (str): Registry name; must not shadow a built-in.
            fn, d1, d2: Vectorized function and derivatives.
            domain (tuple): Open interval where fn is C^2.

        Returns:
            Activation: The new activation.

        Raises:
            ValueError: If the name is taken by a built-in activation.
        """
        key = name.strip().lower()
        if key in _BUILTIN_NAMES:
            raise ValueError(f"Invalid activation name: {name}. "
                             f"Built-in names are reserved")
        lo, hi = domain
        if not lo < hi:
            raise ValueError(f"Invalid activation domain: {domain}")
        activation = cls(name=key, kind=ActivationKind.CUSTOM, fn=fn, d1=d1,
                         d2=d2, domain=(float(lo), float(hi)))
        _REGISTRY[key] = activation
        return activation


def _relu(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0)


def _relu_d1(z: np.ndarray) -> np.ndarray:
    return (np.asarray(z) > 0).astype(float)


def _relu_d2(z: np.ndarray) -> np.ndarray:
    return np.zeros_like(np.asarray(z, dtype=float))


def _tanh_d1(z: np.ndarray) -> np.ndarray:
    e = np.exp(-2.0 * np.abs(z))
    return 4.0 * e / (1.0 + e) ** 2


def _tanh_d2(z: np.ndarray) -> np.ndarray:
    return -2.0 * np.tanh(z) * _tanh_d1(z)


def _sigmoid_d1(z: np.ndarray) -> np.ndarray:
    return expit(z) * expit(-np.asarray(z))


def _sigmoid_d2(z: np.ndarray) -> np.ndarray:
    return -_sigmoid_d1(z) * np.tanh(0.5 * np.asarray(z))


def _tanh_split(z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    # tanh = +-1 -+ 2 expit(-+2z) beyond |z| = 1
    z = np.asarray(z, dtype=float)
    offset = np.where(z >= 1.0, 1.0, np.where(z <= -1.0, -1.0, 0.0))
    residual = np.where(offset > 0, -2.0 * expit(-2.0 * z),
                        np.where(offset < 0, 2.0 * expit(2.0 * z),
                                 np.tanh(z)))
    return offset, residual


def _sigmoid_split(z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    # expit = 1/2 + tanh(z/2)/2 near 0, 1 - expit(-z) above z = 2
    z = np.asarray(z, dtype=float)
    offset = np.where(z >= 2.0, 1.0, np.where(z <= -2.0, 0.0, 0.5))
    residual = np.where(offset == 1.0, -expit(-z),
                        np.where(offset == 0.0, expit(z),
                                 0.5 * np.tanh(0.5 * z)))
    return offset, residual


RELU = Activation("relu", ActivationKind.RELU, _relu, _relu_d1, _relu_d2)
TANH = Activation("tanh", ActivationKind.TANH, np.tanh, _tanh_d1, _tanh_d2,
                  split=_tanh_split)
SIGMOID = Activation("sigmoid", ActivationKind.SIGMOID, expit,
                     _sigmoid_d1, _sigmoid_d2, split=_sigmoid_split)

_BUILTIN_NAMES = ("relu", "tanh", "sigmoid")
_REGISTRY: Dict[str, Activation] = {a.name: a for a in (RELU, TANH, SIGMOID)}
