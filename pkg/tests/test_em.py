import numpy as np
import pytest

from cparm.engines.em import (
    EMConfig,
    EMModel,
    VARIANCE_FLOOR,
    em_fit,
    em_predict,
    map_clusters,
    responsibilities,
)
from cparm.engines.encoding import ColumnSpec, FeatureMatrix
from cparm.errors import SchemaMismatchError, TooFewRowsError, UnfittedModelError


def matrix_from(x, labels=None):
    columns = tuple(ColumnSpec(f"x{i}", "numeric") for i in range(x.shape[1]))
    lab = None if labels is None else np.asarray(labels, dtype=int)
    return FeatureMatrix(columns, np.asarray(x, dtype=float), lab)


def two_blobs(seed=0, n=100, centers=(-5.0, 5.0), sigma=0.5):
    rng = np.random.default_rng(seed)
    a = rng.normal(centers[0], sigma, size=(n, 1))
    b = rng.normal(centers[1], sigma, size=(n, 1))
    x = np.vstack([a, b])
    labels = np.array([0] * n + [1] * n)
    return x, labels


class TestFit:
    def test_recovers_two_blobs(self):
        x, _ = two_blobs()
        model = em_fit(matrix_from(x), EMConfig(seed=3))
        means = sorted(float(m[0]) for m in model.means)
        assert abs(means[0] - (-5.0)) < 0.3
        assert abs(means[1] - 5.0) < 0.3
        for w in model.weights:
            assert abs(float(w) - 0.5) < 0.1

    def test_identical_points_survive(self):
        x = np.full((10, 2), 3.0)
        model = em_fit(matrix_from(x), EMConfig(seed=1))
        assert np.isfinite(model.ll_trace[-1])
        assert np.all(model.variances == VARIANCE_FLOOR)
        assert np.allclose(model.means, 3.0)

    def test_trace_non_decreasing(self):
        rng = np.random.default_rng(8)
        for seed in range(5):
            x = rng.normal(size=(60, 2))
            model = em_fit(matrix_from(x), EMConfig(seed=seed))
            trace = np.array(model.ll_trace)
            assert np.all(np.diff(trace) >= -1e-9)

    def test_responsibilities_rows_sum_to_one(self):
        x, _ = two_blobs(seed=5)
        model = em_fit(matrix_from(x), EMConfig(seed=5))
        resp = responsibilities(model, x)
        assert np.all(np.abs(resp.sum(axis=1) - 1.0) < 1e-12)

    def test_weights_positive_and_normalized(self):
        x, _ = two_blobs(seed=2)
        model = em_fit(matrix_from(x), EMConfig(seed=2))
        assert np.all(model.weights > 0)
        assert abs(float(model.weights.sum()) - 1.0) < 1e-12

    def test_too_few_rows(self):
        with pytest.raises(TooFewRowsError):
            em_fit(matrix_from(np.zeros((3, 1))), EMConfig())

    def test_deterministic_per_seed(self):
        x, _ = two_blobs(seed=7)
        a = em_fit(matrix_from(x), EMConfig(seed=11))
        b = em_fit(matrix_from(x), EMConfig(seed=11))
        assert a.ll_trace == b.ll_trace
        assert np.array_equal(a.means, b.means)


class TestClusterMapping:
    def test_majority_mapping(self):
        x, labels = two_blobs(seed=4)
        matrix = matrix_from(x, labels)
        model = em_fit(matrix.unlabeled(), EMConfig(seed=4))
        mapping = map_clusters(model, matrix)
        assert sorted(mapping) == [0, 1]

    def test_planted_blobs_reach_high_accuracy(self):
        x, labels = two_blobs(seed=6)
        matrix = matrix_from(x, labels)
        model = em_fit(matrix.unlabeled(), EMConfig(seed=6))
        model = model.with_mapping(map_clusters(model, matrix))
        preds, prob_1 = em_predict(model, x)
        accuracy = float((preds == labels).mean())
        assert accuracy >= 0.95
        assert np.all((prob_1 >= 0) & (prob_1 <= 1))

    def test_same_majority_disambiguated_by_attack_fraction(self):
        # both clusters lean label 0; the one with more attacks must map to 1
        x = np.vstack([np.full((10, 1), -4.0), np.full((10, 1), 4.0)])
        labels = np.array([0] * 9 + [1] + [0] * 6 + [1] * 4)
        matrix = matrix_from(x, labels)
        model = em_fit(matrix.unlabeled(), EMConfig(seed=0))
        mapping = map_clusters(model, matrix)
        assert sorted(mapping) == [0, 1]
        resp = responsibilities(model, x)
        hard = resp.argmax(axis=1)
        fractions = [labels[hard == j].mean() for j in range(2)]
        assert mapping[int(np.argmax(fractions))] == 1

    def test_unlabeled_matrix_rejected(self):
        x, labels = two_blobs(seed=9)
        matrix = matrix_from(x, labels)
        model = em_fit(matrix.unlabeled(), EMConfig(seed=9))
        with pytest.raises(SchemaMismatchError):
            map_clusters(model, matrix.unlabeled())

    def test_predict_requires_mapping(self):
        x, _ = two_blobs(seed=10)
        model = em_fit(matrix_from(x), EMConfig(seed=10))
        with pytest.raises(UnfittedModelError):
            em_predict(model, x)

    def test_unfitted_model_rejected(self):
        empty = EMModel(np.array([0.5, 0.5]), np.zeros((2, 1)), np.ones((2, 1)), ())
        with pytest.raises(UnfittedModelError):
            map_clusters(empty, matrix_from(np.zeros((4, 1)), [0, 0, 1, 1]))
