"""Three-layer sigmoid feed-forward network: weights, activations, prediction.

Layer sizes are ``s1 = 27`` inputs, a configurable hidden layer ``s2``,
and ``s3 = 3`` output units (one per carcinoma class).  Bias units are
carried as column 0 of each weight matrix, with a constant activation
of 1 prepended to the input and hidden layers.
"""

from dataclasses import dataclass

import numpy as np

from . import features
from .errors import DimensionMismatch, InvalidInput, InvalidSample

N_INPUTS = features.N_FEATURES  # 27
N_CLASSES = 3

CLASS_NAMES = {1: "breast", 2: "lung", 3: "renal"}


@dataclass(frozen=True)
class Topology:
    """Layer sizes (input, hidden, output)."""

    s1: int = N_INPUTS
    s2: int = 25
    s3: int = N_CLASSES

    def __post_init__(self):
        if self.s1 != N_INPUTS or self.s3 != N_CLASSES:
            raise InvalidInput(
                f"topology must be ({N_INPUTS}, s2, {N_CLASSES}), "
                f"got ({self.s1}, {self.s2}, {self.s3})"
            )
        if self.s2 < 1:
            raise InvalidInput(f"hidden size must be >= 1, got {self.s2}")


@dataclass(frozen=True, eq=False)
class Model:
    """Trained network: weights, topology, feature scaling, penalty weight.

    ``theta1`` has shape (s2, s1+1) and ``theta2`` shape (s3, s2+1);
    column 0 of each holds the bias weights.  The scaling parameters
    fitted on the training features travel with the model so prediction
    standardizes new samples identically.  Immutable once constructed.
    """

    theta1: np.ndarray
    theta2: np.ndarray
    topology: Topology
    scaling: features.ScalingParams
    reg_lambda: float

    def __post_init__(self):
        t1 = np.asarray(self.theta1, dtype=np.float64)
        t2 = np.asarray(self.theta2, dtype=np.float64)
        s1, s2, s3 = self.topology.s1, self.topology.s2, self.topology.s3
        if t1.shape != (s2, s1 + 1):
            raise DimensionMismatch(
                f"theta1 must have shape {(s2, s1 + 1)}, got {t1.shape}"
            )
        if t2.shape != (s3, s2 + 1):
            raise DimensionMismatch(
                f"theta2 must have shape {(s3, s2 + 1)}, got {t2.shape}"
            )
        if not (np.isfinite(t1).all() and np.isfinite(t2).all()):
            raise InvalidInput("model weights must be finite")
        if self.scaling.n_features != s1:
            raise DimensionMismatch(
                f"scaling covers {self.scaling.n_features} features, topology "
                f"expects {s1}"
            )
        if not (np.isfinite(self.reg_lambda) and self.reg_lambda >= 0):
            raise InvalidInput(f"reg_lambda must be >= 0, got {self.reg_lambda}")
        object.__setattr__(self, "theta1", t1)
        object.__setattr__(self, "theta2", t2)
        object.__setattr__(self, "reg_lambda", float(self.reg_lambda))


@dataclass(frozen=True, eq=False)
class ForwardTrace:
    """All activations of one forward pass (bias entries included)."""

    a1: np.ndarray  # (s1+1,) input with bias
    z2: np.ndarray  # (s2,) hidden pre-activations
    a2: np.ndarray  # (s2+1,) hidden activations with bias
    z3: np.ndarray  # (s3,) output pre-activations
    a3: np.ndarray  # (s3,) output activations


def sigmoid(z):
    """Logistic function 1 / (1 + exp(-z)) for scalars or arrays.

    Evaluated in the branch form exp(z) / (1 + exp(z)) for negative z so
    no overflow occurs anywhere in the float64 range.  Values saturate
    to exactly 0.0 or 1.0 only at the limits of float64 resolution
    (|z| beyond roughly 36.7 on the high side, 745 on the low side).
    """
    z = np.asarray(z, dtype=np.float64)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return float(out[0]) if scalar else out


def sigmoid_grad(z):
    """Derivative of the logistic function, g(z) * (1 - g(z))."""
    g = sigmoid(z)
    return g * (1.0 - g)


def forward_batch(theta1, theta2, X):
    """Vectorized forward pass over an (m, s1) matrix of scaled inputs.

    Returns (A1, Z2, A2, Z3, A3) with one row per sample; A1 and A2
    carry the bias column.
    """
    m = X.shape[0]
    ones = np.ones((m, 1))
    A1 = np.hstack([ones, X])
    Z2 = A1 @ theta1.T
    A2 = np.hstack([ones, sigmoid(Z2)])
    Z3 = A2 @ theta2.T
    A3 = sigmoid(Z3)
    return A1, Z2, A2, Z3, A3


def forward(model: Model, x: np.ndarray) -> ForwardTrace:
    """Forward pass for a single already-scaled feature vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != model.topology.s1:
        raise DimensionMismatch(
            f"input must be a vector of length {model.topology.s1}, "
            f"got shape {x.shape}"
        )
    if not np.isfinite(x).all():
        raise InvalidSample("input vector contains non-finite values")
    a1 = np.concatenate(([1.0], x))
    z2 = model.theta1 @ a1
    a2 = np.concatenate(([1.0], sigmoid(z2)))
    z3 = model.theta2 @ a2
    a3 = sigmoid(z3)
    return ForwardTrace(a1=a1, z2=z2, a2=a2, z3=z3, a3=a3)


def label_from_activations(a3) -> int:
    """Decode output activations to a class label.

    Output unit k (0-based) maps to class k+1; ties break toward the
    lowest class index, so the rule is deterministic.
    """
    a3 = np.asarray(a3, dtype=np.float64)
    if a3.shape != (N_CLASSES,):
        raise DimensionMismatch(
            f"expected {N_CLASSES} output activations, got shape {a3.shape}"
        )
    return int(np.argmax(a3)) + 1


def scaled_features(model: Model, samples) -> np.ndarray:
    """Expand raw samples and standardize with the model's stored scaling."""
    expanded = features.expand_matrix(features.raw_matrix(samples))
    return features.apply_scaling(expanded, model.scaling)


def activations(model: Model, samples) -> np.ndarray:
    """Output activations, one (a3_1, a3_2, a3_3) row per sample."""
    X = scaled_features(model, samples)
    return forward_batch(model.theta1, model.theta2, X)[4]


def predict(model: Model, sample: features.MultifractalSample) -> int:
    """Predict the carcinoma class of one raw sample."""
    x = scaled_features(model, [sample])[0]
    trace = forward(model, x)
    return label_from_activations(trace.a3)


def predict_batch(model: Model, samples) -> np.ndarray:
    """Predict class labels for a sequence of raw samples."""
    if len(samples) == 0:
        return np.zeros(0, dtype=np.int64)
    A3 = activations(model, samples)
    return np.argmax(A3, axis=1).astype(np.int64) + 1
