"""Input validation helpers used across the estimator-facing API."""

import numpy as np

from .errors import DimensionMismatch, InvalidInput, InvalidSample

VALID_LABELS = (1, 2, 3)


def as_float_matrix(X, n_cols=None, name="X"):
    """Coerce to a finite 2-D float64 array, optionally with a fixed width."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got ndim={X.ndim}")
    if n_cols is not None and X.shape[1] != n_cols:
        raise DimensionMismatch(
            f"{name} must have {n_cols} columns, got {X.shape[1]}"
        )
    if not np.isfinite(X).all():
        raise InvalidSample(f"{name} contains non-finite values")
    return X


def as_label_vector(y, n_rows=None, name="y"):
    """Coerce to a 1-D int array of class labels in {1, 2, 3}."""
    y = np.asarray(y)
    if y.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-D, got ndim={y.ndim}")
    if n_rows is not None and y.shape[0] != n_rows:
        raise DimensionMismatch(
            f"{name} must have {n_rows} entries, got {y.shape[0]}"
        )
    labels = y.astype(np.int64, copy=True)
    if y.dtype.kind == "f" and not np.array_equal(labels, y):
        raise InvalidInput(f"{name} contains non-integer labels")
    if not np.isin(labels, VALID_LABELS).all():
        bad = labels[~np.isin(labels, VALID_LABELS)][0]
        raise InvalidInput(f"{name} contains label {bad} outside {{1, 2, 3}}")
    return labels
