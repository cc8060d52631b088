"""Cost, backpropagation and batch gradient-descent training.

The cost is the summed per-class cross entropy of the three sigmoid
outputs plus an L2 penalty over all non-bias weights:

    J = (1/m) sum_i sum_k [ -y log a3 - (1-y) log(1-a3) ]
        + (lambda / 2m) (sum theta1[:,1:]**2 + sum theta2[:,1:]**2)

Gradients come from the layer errors delta3 = a3 - y and
delta2 = (theta2^T delta3)[1:] * g'(z2); the penalty contributes
(lambda/m) * theta on non-bias columns only.  Bias columns are never
regularized.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from . import features, network
from ._validation import as_float_matrix
from .errors import (
    DimensionMismatch,
    DivergedTraining,
    InsufficientData,
    InvalidInput,
)

# Output activations are clamped to this interval inside the cost only,
# so -log stays finite at saturation.  Gradients use the raw activations.
COST_CLIP = 1e-12


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters of a training run.

    Defaults are conventional mid-range choices for the 27-input
    topology; none are tuned claims.  ``init_epsilon="auto"`` selects
    the per-layer bound sqrt(6 / (fan_in + fan_out)).
    """

    reg_lambda: float = 1.0
    learning_rate: float = 0.3
    max_iterations: int = 2000
    cost_tolerance: float = 1e-7
    hidden_size: int = 25
    rng_seed: int = 0
    init_epsilon: float | str = "auto"

    def __post_init__(self):
        if not (math.isfinite(self.reg_lambda) and self.reg_lambda >= 0):
            raise InvalidInput(f"reg_lambda must be >= 0, got {self.reg_lambda}")
        if not (math.isfinite(self.learning_rate) and self.learning_rate > 0):
            raise InvalidInput(
                f"learning_rate must be > 0, got {self.learning_rate}"
            )
        if self.max_iterations < 1:
            raise InvalidInput(
                f"max_iterations must be >= 1, got {self.max_iterations}"
            )
        if not (math.isfinite(self.cost_tolerance) and self.cost_tolerance > 0):
            raise InvalidInput(
                f"cost_tolerance must be > 0, got {self.cost_tolerance}"
            )
        if self.hidden_size < 1:
            raise InvalidInput(f"hidden_size must be >= 1, got {self.hidden_size}")
        if self.init_epsilon != "auto":
            try:
                eps = float(self.init_epsilon)
            except (TypeError, ValueError):
                eps = math.nan
            if not (math.isfinite(eps) and eps > 0):
                raise InvalidInput(
                    f"init_epsilon must be > 0 or 'auto', got {self.init_epsilon!r}"
                )


@dataclass(frozen=True, eq=False)
class Gradients:
    """Cost gradients, shaped like the corresponding weight matrices."""

    grad1: np.ndarray
    grad2: np.ndarray


@dataclass(frozen=True, eq=False)
class TrainReport:
    """Cost trajectory of a training run.

    ``cost_history[t]`` is the cost at the start of iteration t+1, so
    its length equals ``iterations_run``.
    """

    cost_history: np.ndarray
    iterations_run: int
    converged: bool


def one_hot(labels) -> np.ndarray:
    """Encode labels in {1, 2, 3} as rows of a (m, 3) 0/1 matrix."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.ndim != 1:
        raise DimensionMismatch("labels must be a 1-D sequence")
    if not np.isin(labels, (1, 2, 3)).all():
        raise InvalidInput("labels must be in {1, 2, 3}")
    Y = np.zeros((labels.shape[0], network.N_CLASSES))
    Y[np.arange(labels.shape[0]), labels - 1] = 1.0
    return Y


def _check_xy(model, X, Y):
    X = as_float_matrix(X, n_cols=model.topology.s1, name="X")
    Y = as_float_matrix(Y, n_cols=network.N_CLASSES, name="Y")
    if X.shape[0] != Y.shape[0]:
        raise DimensionMismatch(
            f"X has {X.shape[0]} rows but Y has {Y.shape[0]}"
        )
    if X.shape[0] < 1:
        raise InvalidInput("need at least one sample")
    if not (np.isin(Y, (0.0, 1.0)).all() and (Y.sum(axis=1) == 1.0).all()):
        raise InvalidInput("Y rows must be one-hot vectors")
    return X, Y


def _data_cost(A3, Y):
    A = np.clip(A3, COST_CLIP, 1.0 - COST_CLIP)
    m = Y.shape[0]
    return float(np.sum(-Y * np.log(A) - (1.0 - Y) * np.log(1.0 - A)) / m)


def _penalty(theta1, theta2, reg_lambda, m):
    if reg_lambda == 0.0:
        return 0.0
    squares = np.sum(theta1[:, 1:] ** 2) + np.sum(theta2[:, 1:] ** 2)
    return float(reg_lambda / (2.0 * m) * squares)


def cost(model: network.Model, X: np.ndarray, Y: np.ndarray) -> float:
    """Regularized cross-entropy cost over scaled features X and one-hot Y."""
    X, Y = _check_xy(model, X, Y)
    A3 = network.forward_batch(model.theta1, model.theta2, X)[4]
    return _data_cost(A3, Y) + _penalty(
        model.theta1, model.theta2, model.reg_lambda, Y.shape[0]
    )


def backprop(model: network.Model, X: np.ndarray, Y: np.ndarray):
    """Cost and analytic gradients via backpropagation.

    Returns ``(cost, Gradients)``; the cost value is computed on the
    same forward activations, so it matches ``cost()`` bitwise.
    """
    X, Y = _check_xy(model, X, Y)
    m = X.shape[0]
    A1, Z2, A2, _, A3 = network.forward_batch(model.theta1, model.theta2, X)

    delta3 = A3 - Y
    # Drop the bias column of theta2 when propagating the error back.
    delta2 = (delta3 @ model.theta2)[:, 1:] * network.sigmoid_grad(Z2)

    grad2 = delta3.T @ A2 / m
    grad1 = delta2.T @ A1 / m
    if model.reg_lambda != 0.0:
        grad1[:, 1:] += (model.reg_lambda / m) * model.theta1[:, 1:]
        grad2[:, 1:] += (model.reg_lambda / m) * model.theta2[:, 1:]

    total = _data_cost(A3, Y) + _penalty(
        model.theta1, model.theta2, model.reg_lambda, m
    )
    return total, Gradients(grad1=grad1, grad2=grad2)


def gradient_check(
    model: network.Model,
    X: np.ndarray,
    Y: np.ndarray,
    step: float = 1e-5,
    grads: Gradients | None = None,
) -> float:
    """Max relative error between analytic and central-difference gradients.

    Every weight w is perturbed to w +/- step and the cost difference
    quotient compared against the analytic entry; the relative error is
    |analytic - numeric| / max(1, |analytic| + |numeric|).  Intended for
    small sample counts (<= 20); runtime grows with weights * samples.
    ``grads`` overrides the analytic gradients, which lets callers
    verify that the check can fail.
    """
    if grads is None:
        _, grads = backprop(model, X, Y)
    worst = 0.0
    for field, analytic in (("theta1", grads.grad1), ("theta2", grads.grad2)):
        theta = getattr(model, field)
        for idx in range(theta.size):
            perturbed = theta.copy()
            perturbed.flat[idx] += step
            j_plus = cost(replace(model, **{field: perturbed}), X, Y)
            perturbed.flat[idx] -= 2.0 * step
            j_minus = cost(replace(model, **{field: perturbed}), X, Y)
            numeric = (j_plus - j_minus) / (2.0 * step)
            a = analytic.flat[idx]
            rel = abs(a - numeric) / max(1.0, abs(a) + abs(numeric))
            worst = max(worst, rel)
    return worst


def init_weights(topology: network.Topology, seed: int, epsilon="auto"):
    """Draw initial weights i.i.d. uniform on [-eps, +eps], seeded.

    With ``epsilon="auto"`` each layer uses
    eps = sqrt(6 / (fan_in + fan_out)) with fan counts excluding bias.
    The same seed always yields bitwise-identical matrices.
    """
    rng = np.random.default_rng(seed)
    if epsilon == "auto":
        eps1 = math.sqrt(6.0 / (topology.s1 + topology.s2))
        eps2 = math.sqrt(6.0 / (topology.s2 + topology.s3))
    else:
        eps1 = eps2 = float(epsilon)
        if not (math.isfinite(eps1) and eps1 > 0):
            raise InvalidInput(f"epsilon must be > 0 or 'auto', got {epsilon}")
    theta1 = rng.uniform(-eps1, eps1, size=(topology.s2, topology.s1 + 1))
    theta2 = rng.uniform(-eps2, eps2, size=(topology.s3, topology.s2 + 1))
    return theta1, theta2


def train(samples, config: TrainConfig = TrainConfig()):
    """Fit a model to labelled samples by full-batch gradient descent.

    Expands features, fits scaling on the given (training) samples,
    initializes weights from the config seed, then repeats
    ``theta <- theta - learning_rate * grad`` until the absolute cost
    change drops below ``cost_tolerance`` or the iteration cap is hit.
    Returns ``(Model, TrainReport)``; the model embeds the fitted
    scaling.  Fully deterministic for fixed data order, seed and config.
    """
    samples = list(samples)
    labels = features.labels_of(samples)
    counts = {int(lab): int(n) for lab, n in zip(*np.unique(labels, return_counts=True))}
    for lab, n in counts.items():
        if n < 2:
            raise InsufficientData(
                f"class {lab} has only {n} sample(s); need at least 2 per class"
            )

    expanded = features.expand_matrix(features.raw_matrix(samples))
    scaling = features.fit_scaling(expanded)
    X = features.apply_scaling(expanded, scaling)
    Y = one_hot(labels)

    topology = network.Topology(s2=config.hidden_size)
    theta1, theta2 = init_weights(topology, config.rng_seed, config.init_epsilon)
    model = network.Model(
        theta1=theta1,
        theta2=theta2,
        topology=topology,
        scaling=scaling,
        reg_lambda=config.reg_lambda,
    )

    history = []
    converged = False
    # Divergence is detected explicitly below; silence the transient
    # overflow warnings numpy would emit on the way to a non-finite cost.
    with np.errstate(over="ignore", invalid="ignore"):
        for iteration in range(1, config.max_iterations + 1):
            j, grads = backprop(model, X, Y)
            if not math.isfinite(j):
                raise DivergedTraining(iteration)
            history.append(j)
            if (
                len(history) >= 2
                and abs(history[-1] - history[-2]) < config.cost_tolerance
            ):
                converged = True
                break
            theta1 = model.theta1 - config.learning_rate * grads.grad1
            theta2 = model.theta2 - config.learning_rate * grads.grad2
            if not (np.isfinite(theta1).all() and np.isfinite(theta2).all()):
                raise DivergedTraining(iteration)
            model = replace(model, theta1=theta1, theta2=theta2)

    report = TrainReport(
        cost_history=np.asarray(history),
        iterations_run=len(history),
        converged=converged,
    )
    return model, report
