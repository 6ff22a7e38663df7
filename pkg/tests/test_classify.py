"""Sample containers, classifier wrappers, and metric computation."""

from __future__ import annotations

import numpy as np
import pytest

from specfake.classify import (
    LabeledSample,
    Metrics,
    evaluate,
    kmeans_classifier,
    kmeans_fit,
    lr_predict,
    lr_train,
    stack_samples,
    svm_predict,
    svm_train,
)
from specfake.errors import DataError, DimensionError, ParameterError
from specfake.svm import SvmTrainConfig


def _separable_samples(n_per: int = 10, seed: int = 0):
    rng = np.random.default_rng(seed)
    out = []
    for label, center in ((0, -3.0), (1, 3.0)):
        for _ in range(n_per):
            out.append(LabeledSample(
                features=rng.normal(center, 0.5, 2), label=label
            ))
    return out


class TestLabeledSample:
    def test_valid(self):
        s = LabeledSample(features=np.array([1.0, 2.0]), label=1)
        assert s.label == 1 and s.features.shape == (2,)

    def test_rejects_bad_label(self):
        with pytest.raises(ParameterError):
            LabeledSample(features=np.array([1.0]), label=2)

    def test_rejects_non_finite_features(self):
        with pytest.raises(ParameterError):
            LabeledSample(features=np.array([np.nan]), label=0)

    def test_rejects_non_vector_features(self):
        with pytest.raises(DimensionError):
            LabeledSample(features=np.zeros((2, 2)), label=0)


class TestStackSamples:
    def test_accepts_objects_and_tuples(self):
        samples = [LabeledSample(features=np.array([1.0, 2.0]), label=1),
                   (np.array([3.0, 4.0]), 0)]
        X, y = stack_samples(samples)
        np.testing.assert_allclose(X, [[1.0, 2.0], [3.0, 4.0]])
        np.testing.assert_array_equal(y, [1, 0])

    def test_rejects_empty(self):
        with pytest.raises(DataError):
            stack_samples([])

    def test_rejects_ragged_dimensions(self):
        with pytest.raises(DimensionError):
            stack_samples([(np.array([1.0]), 0), (np.array([1.0, 2.0]), 1)])


class TestWrappers:
    def test_lr_round_trip(self):
        samples = _separable_samples()
        model = lr_train(samples)
        label, prob = lr_predict(model, np.array([3.0, 3.0]))
        assert label == 1 and prob > 0.9
        label, prob = lr_predict(model, np.array([-3.0, -3.0]))
        assert label == 0 and prob < 0.1

    def test_svm_round_trip(self):
        samples = _separable_samples()
        model = svm_train(samples, SvmTrainConfig(seed=1))
        assert svm_predict(model, np.array([3.0, 3.0])) == 1
        assert svm_predict(model, np.array([-3.0, -3.0])) == 0

    def test_kmeans_round_trip(self):
        samples = _separable_samples()
        centroids = kmeans_fit(samples, K=2, seed=0)
        model = kmeans_classifier(centroids, samples)
        assert model.predict(np.array([[3.0, 3.0]]))[0] == 1
        assert model.predict(np.array([[-3.0, -3.0]]))[0] == 0


class TestEvaluate:
    def test_perfect_predictor(self):
        samples = _separable_samples(n_per=5)
        model = svm_train(samples, SvmTrainConfig(seed=0))
        m = evaluate(model, samples)
        assert m.accuracy == 1.0
        assert m.confusion[0, 1] == 0 and m.confusion[1, 0] == 0
        assert m.confusion.sum() == len(samples)

    def test_constant_predictor_on_balanced_set(self):
        class AlwaysReal:
            def predict(self, X):
                return np.ones(len(X), dtype=int)

        samples = _separable_samples(n_per=6)
        m = evaluate(AlwaysReal(), samples)
        assert m.accuracy == 0.5
        assert m.recall[1] == 1.0 and m.recall[0] == 0.0
        # nothing was predicted fake, so fake precision falls back to 0
        assert m.precision[0] == 0.0

    def test_confusion_orientation(self):
        class AlwaysFake:
            def predict(self, X):
                return np.zeros(len(X), dtype=int)

        samples = [LabeledSample(features=np.array([0.0]), label=1)]
        m = evaluate(AlwaysFake(), samples)
        # row = true label, column = predicted label
        assert m.confusion[1, 0] == 1 and m.accuracy == 0.0

    def test_empty_test_set_rejected(self):
        class Anything:
            def predict(self, X):
                return np.zeros(len(X), dtype=int)

        with pytest.raises(DataError):
            evaluate(Anything(), [])

    def test_metrics_fields(self):
        samples = _separable_samples(n_per=4)
        model = lr_train(samples)
        m = evaluate(model, samples)
        assert isinstance(m, Metrics)
        assert 0.0 <= m.accuracy <= 1.0
        assert m.confusion.shape == (2, 2)
        assert m.precision.shape == (2,) and m.recall.shape == (2,)
