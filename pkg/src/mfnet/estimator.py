"""Scikit-learn style front end for the full classification pipeline."""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError

from . import features, network, training
from ._validation import as_float_matrix, as_label_vector


class MFNetClassifier(BaseEstimator, ClassifierMixin):
    """Sigmoid feed-forward network over quadratic multifractal features.

    ``fit`` expects ``X`` with one row of the six raw parameters per
    sample and ``y`` with class labels in {1, 2, 3}.  The quadratic
    feature expansion and the z-score scaling are fitted on the training
    data and stored inside the trained model, so ``predict`` consumes
    raw six-parameter rows as well.

    Parameters
    ----------
    hidden_size : int
        Number of hidden-layer units.
    reg_lambda : float
        L2 penalty weight over non-bias weights.
    learning_rate : float
        Step size of full-batch gradient descent.
    max_iterations : int
        Iteration cap.
    cost_tolerance : float
        Convergence threshold on the absolute cost change.
    random_state : int
        Seed for the weight initialization.
    init_epsilon : float or "auto"
        Uniform initialization bound, or "auto" for
        sqrt(6 / (fan_in + fan_out)) per layer.

    Attributes
    ----------
    model_ : network.Model
        Trained weights, topology and embedded scaling.
    report_ : training.TrainReport
        Cost history and convergence flag of the fit.
    classes_ : ndarray
        Always ``[1, 2, 3]``.
    """

    def __init__(
        self,
        hidden_size=25,
        reg_lambda=1.0,
        learning_rate=0.3,
        max_iterations=2000,
        cost_tolerance=1e-7,
        random_state=0,
        init_epsilon="auto",
    ):
        self.hidden_size = hidden_size
        self.reg_lambda = reg_lambda
        self.learning_rate = learning_rate
        self.max_iterations = max_iterations
        self.cost_tolerance = cost_tolerance
        self.random_state = random_state
        self.init_epsilon = init_epsilon

    def _config(self) -> training.TrainConfig:
        return training.TrainConfig(
            reg_lambda=self.reg_lambda,
            learning_rate=self.learning_rate,
            max_iterations=self.max_iterations,
            cost_tolerance=self.cost_tolerance,
            hidden_size=self.hidden_size,
            rng_seed=self.random_state,
            init_epsilon=self.init_epsilon,
        )

    @staticmethod
    def _samples(X, y=None):
        X = as_float_matrix(X, n_cols=features.N_RAW_PARAMS)
        labels = None if y is None else as_label_vector(y, n_rows=X.shape[0])
        return [
            features.MultifractalSample(
                *row, label=None if labels is None else int(labels[i])
            )
            for i, row in enumerate(X)
        ]

    def fit(self, X, y):
        self.model_, self.report_ = training.train(
            self._samples(X, y), self._config()
        )
        self.classes_ = np.array([1, 2, 3])
        return self

    def _check_fitted(self):
        if not hasattr(self, "model_"):
            raise NotFittedError("MFNetClassifier is not fitted; call fit() first")

    def decision_function(self, X):
        """Output-unit activations, one (3,) row per sample."""
        self._check_fitted()
        return network.activations(self.model_, self._samples(X))

    def predict(self, X):
        self._check_fitted()
        return network.predict_batch(self.model_, self._samples(X))
