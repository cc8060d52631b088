import math

import numpy as np
import pytest
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import Pipeline

from mfnet import features
from mfnet.errors import (
    DegenerateFeature,
    DimensionMismatch,
    InsufficientData,
    InvalidSample,
)
from oracles import enumerate_quadratic


def sample(*values, label=None):
    return features.MultifractalSample(*values, label=label)


class TestMultifractalSample:
    def test_stores_parameters_in_order(self):
        s = sample(1.0, 2.0, 3.0, 4.0, 5.0, 6.0, label=2)
        np.testing.assert_array_equal(s.as_array(), [1, 2, 3, 4, 5, 6])
        assert s.label == 2

    def test_label_optional(self):
        assert sample(0, 0, 0, 0, 0, 0).label is None

    @pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf, "abc"])
    def test_rejects_non_finite_parameters(self, bad):
        with pytest.raises(InvalidSample):
            sample(bad, 0, 0, 0, 0, 0)

    @pytest.mark.parametrize("bad", [0, 4, -1, 1.5])
    def test_rejects_labels_outside_domain(self, bad):
        with pytest.raises(InvalidSample):
            sample(0, 0, 0, 0, 0, 0, label=bad)

    def test_numpy_label_accepted(self):
        assert sample(0, 0, 0, 0, 0, 0, label=np.int64(3)).label == 3


class TestExpandFeatures:
    def test_zero_input_gives_all_zeros(self):
        out = features.expand_features(sample(0, 0, 0, 0, 0, 0))
        assert out.shape == (27,)
        np.testing.assert_array_equal(out, 0.0)

    def test_ones_input_gives_all_ones(self):
        out = features.expand_features(sample(1, 1, 1, 1, 1, 1))
        np.testing.assert_array_equal(out, 1.0)

    def test_sparse_input_positions(self):
        # Quadratic block for (1, 2, 0, 0, 0, 0) has x1^2, x1*x2, x2^2
        # at the lexicographic (i, j) slots and zeros elsewhere.
        out = features.expand_features(sample(1, 2, 0, 0, 0, 0))
        expected = [1, 2, 0, 0, 0, 0] + enumerate_quadratic([1, 2, 0, 0, 0, 0])
        np.testing.assert_array_equal(out, expected)
        assert out[6] == 1.0 and out[7] == 2.0 and out[12] == 4.0
        assert np.count_nonzero(out) == 5

    def test_quadratic_block_matches_enumeration(self):
        rng = np.random.default_rng(42)
        for _ in range(50):
            raw = rng.uniform(-3, 3, 6)
            out = features.expand_features(sample(*raw))
            np.testing.assert_array_equal(out[:6], raw)
            np.testing.assert_array_equal(out[6:], enumerate_quadratic(list(raw)))
        assert len(features.QUADRATIC_PAIRS) == 21
        assert features.N_FEATURES == 27

    def test_pure_function(self):
        s = sample(0.3, -1.7, 2.9, 0.4, 1.1, 1.8)
        np.testing.assert_array_equal(
            features.expand_features(s), features.expand_features(s)
        )

    def test_independent_of_label(self):
        a = sample(1, 2, 3, 4, 5, 6, label=1)
        b = sample(1, 2, 3, 4, 5, 6, label=3)
        np.testing.assert_array_equal(
            features.expand_features(a), features.expand_features(b)
        )

    def test_matrix_and_vector_paths_agree(self):
        rng = np.random.default_rng(3)
        raw = rng.uniform(-2, 2, (10, 6))
        X = features.expand_matrix(raw)
        for i in range(10):
            np.testing.assert_array_equal(X[i], features.expand_features(sample(*raw[i])))

    def test_matrix_rejects_bad_input(self):
        with pytest.raises(DimensionMismatch):
            features.expand_matrix(np.zeros((3, 5)))
        with pytest.raises(InvalidSample):
            features.expand_matrix(np.full((2, 6), np.nan))


class TestFitScaling:
    def test_simple_column(self):
        # {1, 2, 3}: mean 2, sample variance 1, sigma 1.
        p = features.fit_scaling(np.array([[1.0], [2.0], [3.0]]))
        assert p.means[0] == 2.0
        assert p.std_devs[0] == 1.0

    def test_two_point_column(self):
        # {-1, 1}: mean 0, sample variance 2, sigma sqrt(2).
        p = features.fit_scaling(np.array([[-1.0], [1.0]]))
        assert p.means[0] == 0.0
        assert p.std_devs[0] == math.sqrt(2.0)

    def test_sample_variance_convention(self):
        rng = np.random.default_rng(8)
        col = rng.normal(size=11)
        p = features.fit_scaling(col[:, None])
        mu = sum(col) / 11
        var = sum((v - mu) ** 2 for v in col) / 10  # 1/(m-1)
        assert p.std_devs[0] == pytest.approx(math.sqrt(var), rel=1e-15)

    def test_constant_column_is_an_error(self):
        X = np.ones((4, 3))
        X[:, 0] = [1, 2, 3, 4]
        X[:, 2] = [4, 3, 2, 1]
        with pytest.raises(DegenerateFeature) as exc:
            features.fit_scaling(X)
        assert exc.value.column == 1

    def test_constant_column_detected_despite_rounding(self):
        # Mean of [0.1, 0.1, 0.1] is not bitwise 0.1, but the column is
        # still constant and must be rejected.
        with pytest.raises(DegenerateFeature):
            features.fit_scaling(np.full((3, 1), 0.1))

    def test_too_few_rows(self):
        with pytest.raises(InsufficientData):
            features.fit_scaling(np.array([[1.0, 2.0]]))

    def test_row_permutation_invariance(self):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(30, 4))
        p1 = features.fit_scaling(X)
        p2 = features.fit_scaling(X[rng.permutation(30)])
        np.testing.assert_allclose(p1.means, p2.means, atol=1e-14)
        np.testing.assert_allclose(p1.std_devs, p2.std_devs, rtol=1e-14)


class TestApplyScaling:
    def test_known_column(self):
        p = features.ScalingParams(means=np.array([2.0]), std_devs=np.array([1.0]))
        out = features.apply_scaling(np.array([[1.0], [2.0], [3.0]]), p)
        np.testing.assert_array_equal(out[:, 0], [-1.0, 0.0, 1.0])

    def test_self_scaling_standardizes(self):
        rng = np.random.default_rng(12)
        X = rng.normal(loc=5.0, scale=3.0, size=(200, 6))
        Z = features.apply_scaling(X, features.fit_scaling(X))
        assert np.abs(Z.mean(axis=0)).max() <= 1e-12
        assert np.abs(Z.std(axis=0, ddof=1) - 1.0).max() <= 1e-12

    def test_row_of_means_maps_to_zero(self):
        X = np.array([[1.0, 10.0], [3.0, 30.0]])
        p = features.fit_scaling(X)
        out = features.apply_scaling(p.means[None, :], p)
        np.testing.assert_array_equal(out, 0.0)

    def test_dimension_mismatch(self):
        p = features.ScalingParams(means=np.zeros(3), std_devs=np.ones(3))
        with pytest.raises(DimensionMismatch):
            features.apply_scaling(np.zeros((2, 4)), p)

    def test_round_trip(self):
        rng = np.random.default_rng(77)
        X = rng.uniform(-10, 10, (50, 27))
        X[:, 0] += 100.0  # offset column exercises cancellation
        p = features.fit_scaling(X)
        back = features.invert_scaling(features.apply_scaling(X, p), p)
        np.testing.assert_allclose(back, X, rtol=1e-10)


class TestScalingParams:
    def test_rejects_nonpositive_sigma(self):
        with pytest.raises(DegenerateFeature):
            features.ScalingParams(means=np.zeros(2), std_devs=np.array([1.0, 0.0]))

    def test_rejects_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            features.ScalingParams(means=np.zeros(2), std_devs=np.ones(3))


class TestTransformers:
    def test_quadratic_expansion_matches_function(self):
        rng = np.random.default_rng(1)
        raw = rng.normal(size=(8, 6))
        out = features.QuadraticExpansion().fit_transform(raw)
        np.testing.assert_array_equal(out, features.expand_matrix(raw))

    def test_zscore_scaler_round_trip(self):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(40, 5))
        scaler = features.ZScoreScaler().fit(X)
        Z = scaler.transform(X)
        np.testing.assert_array_equal(Z, features.apply_scaling(X, scaler.params_))
        np.testing.assert_allclose(scaler.inverse_transform(Z), X, rtol=1e-10)

    def test_zscore_scaler_requires_fit(self):
        with pytest.raises(NotFittedError):
            features.ZScoreScaler().transform(np.zeros((2, 2)))

    def test_pipeline_composition(self):
        rng = np.random.default_rng(3)
        raw = rng.normal(size=(30, 6))
        pipe = Pipeline(
            [("expand", features.QuadraticExpansion()), ("scale", features.ZScoreScaler())]
        )
        Z = pipe.fit_transform(raw)
        assert Z.shape == (30, 27)
        assert np.abs(Z.mean(axis=0)).max() <= 1e-12
