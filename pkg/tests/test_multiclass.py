import numpy as np
import pytest

from lcsvm.data_io import Raster, SampleSet, gen_synthetic
from lcsvm.errors import DimensionError, InputError
from lcsvm.kernels import KernelSpec
from lcsvm.multiclass import (classify_raster, pairwise_tallies, predict_many, predict_one,
                              resolve_votes, train_multiclass, train_pair)
from lcsvm.svm import decision_values

CENTERS = [[0, 0], [5, 0], [0, 5]]


@pytest.fixture(scope="module")
def blobs():
    rng = np.random.default_rng(3)
    X = np.vstack([rng.normal(size=(30, 2)) + c for c in CENTERS])
    return SampleSet(X, np.repeat([0, 1, 2], 30), ["a", "b", "c"])


@pytest.fixture(scope="module")
def blob_model(blobs):
    return train_multiclass(blobs, KernelSpec.linear(), 10.0)


@pytest.fixture(scope="module")
def scene():
    return gen_synthetic(42)


@pytest.fixture(scope="module")
def scene_model(scene):
    return train_multiclass(scene.samples, KernelSpec.rbf(0.5), 10.0)


def test_two_classes_train_one_pair():
    X = [[-2.0], [-1.0], [1.0], [2.0]]
    model = train_multiclass(SampleSet(X, [0, 0, 1, 1], ["left", "right"]),
                             KernelSpec.linear(), 1.0)
    assert len(model.pairs) == 1
    assert predict_one(model, [-3.0]) == 0
    assert predict_one(model, [3.0]) == 1


def test_five_classes_train_ten_pairs(scene_model):
    assert len(scene_model.pairs) == 10
    assert [(p.positive, p.negative) for p in scene_model.pairs] == [
        (i, j) for i in range(5) for j in range(i + 1, 5)]


def test_blob_training_accuracy(blobs, blob_model):
    predicted = predict_many(blob_model, blobs.features)
    # regression value for this seed
    assert int((predicted == blobs.labels).sum()) == 89
    assert np.mean(predicted == blobs.labels) >= 0.95


class TestResolveVotes:
    def test_plain_majority(self):
        assert resolve_votes(np.array([[1, 2, 0]]), np.zeros((1, 3))).tolist() == [1]

    def test_tie_goes_to_larger_strength(self):
        votes = np.array([[1, 1, 1]])
        assert resolve_votes(votes, np.array([[0.2, 0.9, 0.4]])).tolist() == [1]

    def test_strength_ignored_outside_top_votes(self):
        votes = np.array([[2, 2, 0]])
        assert resolve_votes(votes, np.array([[0.1, 0.2, 9.0]])).tolist() == [1]

    def test_full_tie_goes_to_lowest_index(self):
        assert resolve_votes(np.array([[1, 1, 1]]), np.ones((1, 3))).tolist() == [0]


def test_circular_votes_resolved_by_manual_strength(blob_model):
    # Linear one-vs-one leaves a triangle in the middle where each class wins once.
    probes = np.random.default_rng(0).uniform(-2, 7, size=(5000, 2))
    votes, _ = pairwise_tallies(blob_model, probes)
    circular = probes[np.all(votes == 1, axis=1)]
    assert len(circular) > 0
    Xs = blob_model.scaler.transform(circular)
    strength = np.zeros((len(circular), 3))
    for pair in blob_model.pairs:
        for row, f in enumerate(decision_values(pair.model, Xs)):
            strength[row, pair.positive if f >= 0 else pair.negative] += abs(f)
    np.testing.assert_array_equal(predict_many(blob_model, circular), np.argmax(strength, axis=1))


def test_swapped_pair_roles_are_antisymmetric(blobs, blob_model):
    X = blob_model.scaler.transform(blobs.features)
    probes = blob_model.scaler.transform(np.random.default_rng(5).uniform(-2, 7, size=(200, 2)))
    for pair in blob_model.pairs:
        swapped = train_pair(X, blobs.labels, pair.negative, pair.positive,
                             blob_model.kernel, blob_model.C)
        np.testing.assert_allclose(decision_values(swapped.model, probes),
                                   -decision_values(pair.model, probes), atol=1e-9)


def test_raster_agrees_with_pointwise_prediction(scene, scene_model):
    cmap, n_bad = classify_raster(scene_model, scene.raster)
    assert n_bad == 0
    pixels = scene.raster.pixels()
    idx = np.random.default_rng(1).choice(len(pixels), 300, replace=False)
    flat = cmap.values.ravel()
    for i in idx:
        assert flat[i] == predict_one(scene_model, pixels[i]) + 1


def test_scene_class_counts(scene, scene_model):
    cmap, _ = classify_raster(scene_model, scene.raster)
    # regression values for seed 42, rbf(0.5), C=10
    assert np.bincount(cmap.values.ravel(), minlength=6).tolist() == [0, 521, 762, 926, 894, 993]
    again, _ = classify_raster(scene_model, scene.raster)
    np.testing.assert_array_equal(cmap.values, again.values)


def test_single_pixel_raster(scene, scene_model):
    pixel = scene.samples.features[0]
    cmap, n_bad = classify_raster(scene_model, Raster(pixel.reshape(-1, 1, 1)))
    assert cmap.values.shape == (1, 1)
    assert n_bad == 0
    assert cmap.values[0, 0] == predict_one(scene_model, pixel) + 1


def test_uniform_water_raster(scene, scene_model):
    water = scene.mode_means[0][0]
    data = np.broadcast_to(water.reshape(-1, 1, 1), (water.size, 4, 5))
    cmap, _ = classify_raster(scene_model, Raster(np.array(data)))
    assert np.all(cmap.values == 1)


def test_invalid_pixels_left_unclassified(scene, scene_model):
    data = scene.raster.data[:, :4, :4].astype(np.float32).copy()
    data[2, 0, 0] = np.nan
    data[0, 1, 1] = np.inf
    data[3, 2, 2] = -9999.0
    cmap, n_bad = classify_raster(scene_model, Raster(data, nodata=-9999.0))
    assert n_bad == 3
    assert cmap.values[0, 0] == cmap.values[1, 1] == cmap.values[2, 2] == 0
    assert np.count_nonzero(cmap.values) == 13


def test_band_count_mismatch(scene_model):
    with pytest.raises(DimensionError):
        classify_raster(scene_model, Raster(np.zeros((3, 2, 2))))


def test_empty_class_rejected():
    with pytest.raises(InputError):
        train_multiclass(SampleSet([[0.0], [1.0]], [0, 0], ["a", "b"]), KernelSpec.linear(), 1.0)


def test_single_class_rejected():
    with pytest.raises(InputError):
        train_multiclass(SampleSet([[0.0], [1.0]], [0, 0], ["a"]), KernelSpec.linear(), 1.0)
