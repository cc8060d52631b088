"""Feature construction for multifractal bone-metastasis samples.

A raw sample is six multifractal image parameters.  The network input is
the 27-dimensional expansion of those six values: the raw parameters
followed by every degree-2 monomial ``x_i * x_j`` with ``i <= j``
(21 products), after which each column is standardized to zero mean and
unit sample variance.
"""

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from ._validation import as_float_matrix
from .errors import (
    DegenerateFeature,
    DimensionMismatch,
    InsufficientData,
    InvalidSample,
)

PARAMETER_NAMES = (
    "d_max",
    "q",
    "alpha_min",
    "f_alpha_min",
    "alpha_max",
    "f_alpha_max",
)

N_RAW_PARAMS = 6

# (i, j) index pairs of the quadratic block, lexicographic with i <= j.
QUADRATIC_PAIRS = tuple(
    (i, j) for i in range(N_RAW_PARAMS) for j in range(i, N_RAW_PARAMS)
)

N_FEATURES = N_RAW_PARAMS + len(QUADRATIC_PAIRS)  # 6 + 21 = 27


@dataclass(frozen=True)
class MultifractalSample:
    """One observation: six multifractal parameters plus an optional label.

    Parameters are, in order: maximum of the generalized fractal
    dimension, fractal-dimension exponent, Hoelder-exponent minimum,
    spectrum minimum, Hoelder-exponent maximum, spectrum maximum.
    ``label`` identifies the primary carcinoma: 1 breast, 2 lung,
    3 renal.  No ordering is assumed between ``alpha_min`` and
    ``alpha_max``; they are opaque measurements.
    """

    d_max: float
    q: float
    alpha_min: float
    f_alpha_min: float
    alpha_max: float
    f_alpha_max: float
    label: int | None = None

    def __post_init__(self):
        for name in PARAMETER_NAMES:
            raw = getattr(self, name)
            try:
                value = float(raw)
            except (TypeError, ValueError):
                raise InvalidSample(f"{name} is not a number: {raw!r}") from None
            if not math.isfinite(value):
                raise InvalidSample(f"{name} must be finite, got {raw!r}")
            object.__setattr__(self, name, value)
        if self.label is not None:
            lab = int(self.label)
            if lab != self.label or lab not in (1, 2, 3):
                raise InvalidSample(
                    f"label must be one of 1, 2, 3, got {self.label!r}"
                )
            object.__setattr__(self, "label", lab)

    def as_array(self) -> np.ndarray:
        """The six raw parameters as a float64 vector, fixed order."""
        return np.array([getattr(self, n) for n in PARAMETER_NAMES])


@dataclass(frozen=True, eq=False)
class ScalingParams:
    """Per-column mean and sample standard deviation of a feature matrix."""

    means: np.ndarray
    std_devs: np.ndarray

    def __post_init__(self):
        means = np.asarray(self.means, dtype=np.float64)
        stds = np.asarray(self.std_devs, dtype=np.float64)
        if means.ndim != 1 or stds.shape != means.shape:
            raise DimensionMismatch("means and std_devs must be equal-length vectors")
        if not (np.isfinite(means).all() and np.isfinite(stds).all()):
            raise InvalidSample("scaling parameters must be finite")
        if (stds <= 0).any():
            raise DegenerateFeature(int(np.argmax(stds <= 0)))
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "std_devs", stds)

    @property
    def n_features(self) -> int:
        return self.means.shape[0]


def raw_matrix(samples) -> np.ndarray:
    """Stack samples into an (m, 6) matrix of raw parameters."""
    return np.array([s.as_array() for s in samples], dtype=np.float64).reshape(
        len(samples), N_RAW_PARAMS
    )


def labels_of(samples) -> np.ndarray:
    """Extract labels as an int vector; every sample must be labelled."""
    labs = []
    for i, s in enumerate(samples):
        if s.label is None:
            raise InvalidSample(f"sample {i} has no class label")
        labs.append(s.label)
    return np.asarray(labs, dtype=np.int64)


def expand_features(sample: MultifractalSample) -> np.ndarray:
    """Expand one sample to the 27-entry network input vector.

    Entries 0-5 are the raw parameters in fixed order; entries 6-26 are
    the products ``x_i * x_j`` over all pairs ``i <= j`` in lexicographic
    order.  Pure function of the parameters; the label is ignored.
    """
    return expand_matrix(sample.as_array()[None, :])[0]


def expand_matrix(raw: np.ndarray) -> np.ndarray:
    """Expand an (m, 6) raw-parameter matrix to the (m, 27) feature matrix."""
    raw = as_float_matrix(raw, n_cols=N_RAW_PARAMS, name="raw parameters")
    quad = np.column_stack([raw[:, i] * raw[:, j] for i, j in QUADRATIC_PAIRS])
    return np.hstack([raw, quad])


def fit_scaling(features: np.ndarray) -> ScalingParams:
    """Estimate per-column mean and sample standard deviation.

    The variance uses the 1/(m-1) convention.  A column with fewer than
    two distinct values cannot be standardized and raises
    ``DegenerateFeature`` naming the column.
    """
    X = as_float_matrix(features, name="features")
    if X.shape[0] < 2:
        raise InsufficientData(
            f"need at least 2 rows to fit scaling, got {X.shape[0]}"
        )
    spans = np.ptp(X, axis=0)
    if (spans == 0).any():
        raise DegenerateFeature(int(np.argmax(spans == 0)))
    means = np.mean(X, axis=0)
    stds = np.std(X, axis=0, ddof=1)
    if (stds == 0).any():
        raise DegenerateFeature(int(np.argmax(stds == 0)))
    return ScalingParams(means=means, std_devs=stds)


def apply_scaling(features: np.ndarray, params: ScalingParams) -> np.ndarray:
    """Standardize columns: ``(x - mean) / std`` per column."""
    X = as_float_matrix(features, name="features")
    if X.shape[1] != params.n_features:
        raise DimensionMismatch(
            f"features have {X.shape[1]} columns, scaling expects {params.n_features}"
        )
    return (X - params.means) / params.std_devs


def invert_scaling(scaled: np.ndarray, params: ScalingParams) -> np.ndarray:
    """Undo ``apply_scaling``: ``x * std + mean`` per column."""
    Z = as_float_matrix(scaled, name="scaled features")
    if Z.shape[1] != params.n_features:
        raise DimensionMismatch(
            f"scaled features have {Z.shape[1]} columns, scaling expects "
            f"{params.n_features}"
        )
    return Z * params.std_devs + params.means


class QuadraticExpansion(BaseEstimator, TransformerMixin):
    """Stateless transformer from (m, 6) raw parameters to (m, 27) features."""

    def fit(self, X, y=None):
        as_float_matrix(X, n_cols=N_RAW_PARAMS)
        return self

    def transform(self, X):
        return expand_matrix(X)


class ZScoreScaler(BaseEstimator, TransformerMixin):
    """Column standardizer with the 1/(m-1) variance convention.

    Unlike generic scalers this one refuses constant columns instead of
    silently passing them through, because downstream division by the
    column deviation must stay well defined.
    """

    def fit(self, X, y=None):
        self.params_ = fit_scaling(X)
        return self

    def transform(self, X):
        self._check_fitted()
        return apply_scaling(X, self.params_)

    def inverse_transform(self, X):
        self._check_fitted()
        return invert_scaling(X, self.params_)

    def _check_fitted(self):
        if not hasattr(self, "params_"):
            raise NotFittedError("ZScoreScaler is not fitted; call fit() first")
