"""One-vs-one multiclass SVM with pairwise voting, and raster classification.

In memory classes are indexed 0..k-1.  Class maps on disk use codes 1..k,
with 0 reserved for pixels that could not be classified.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .data_io.raster import ClassRaster, Raster
from .data_io.samples import SampleSet
from .data_io.scaling import Scaler, fit_scaler
from .errors import ConvergenceError, DimensionError, InputError
from .kernels import KernelSpec
from .svm import BinaryModel, BinaryProblem, SolverSettings, decision_values, train_binary

log = logging.getLogger(__name__)

STRATEGY = "one-vs-one"


@dataclass(frozen=True)
class PairModel:
    """Binary model voting for ``positive`` when f(x) >= 0, else ``negative``."""

    positive: int
    negative: int
    model: BinaryModel


@dataclass(frozen=True)
class MulticlassModel:
    classes: tuple
    pairs: tuple
    scaler: Scaler
    kernel: KernelSpec
    C: float

    @property
    def k(self) -> int:
        return len(self.classes)

    @property
    def dimension(self) -> int:
        return self.scaler.dimension


def train_pair(features, labels, positive: int, negative: int, kernel: KernelSpec,
               C: float, settings: SolverSettings | None = None) -> PairModel:
    """Train the binary contest ``positive`` (+1) against ``negative`` (-1).

    ``features`` must already be scaled.
    """
    mask = (labels == positive) | (labels == negative)
    y = np.where(labels[mask] == positive, 1.0, -1.0)
    problem = BinaryProblem(features[mask], y, C, kernel)
    return PairModel(positive, negative, train_binary(problem, settings))


def train_multiclass(samples: SampleSet, kernel: KernelSpec, C: float,
                     settings: SolverSettings | None = None) -> MulticlassModel:
    """Fit a scaler on ``samples`` and train one binary SVM per class pair."""
    if samples.k < 2:
        raise InputError("multiclass training needs at least two classes")
    counts = samples.class_counts()
    for name, count in zip(samples.classes, counts):
        if count == 0:
            raise InputError(f"class {name!r} has no training samples")
    scaler = fit_scaler(samples.features)
    X = scaler.transform(samples.features)
    pairs = []
    for i, j in combinations(range(samples.k), 2):
        try:
            pairs.append(train_pair(X, samples.labels, i, j, kernel, C, settings))
        except ConvergenceError as exc:
            raise ConvergenceError(
                f"pair ({samples.classes[i]}, {samples.classes[j]}): {exc}",
                violation=exc.violation) from exc
    log.info("trained %d pairwise models (%s, C=%g)", len(pairs), kernel.describe(), C)
    return MulticlassModel(tuple(samples.classes), tuple(pairs), scaler, kernel, float(C))


def pairwise_tallies(model: MulticlassModel, X) -> tuple[np.ndarray, np.ndarray]:
    """Vote counts and summed winning |f(x)| per class, each shaped (n, k)."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.shape[1] != model.dimension:
        raise DimensionError(f"expected {model.dimension} features, got {X.shape[1]}")
    Xs = model.scaler.transform(X)
    n = Xs.shape[0]
    votes = np.zeros((n, model.k), dtype=np.int64)
    strength = np.zeros((n, model.k))
    rows = np.arange(n)
    for pair in model.pairs:
        f = decision_values(pair.model, Xs)
        winner = np.where(f >= 0, pair.positive, pair.negative)
        votes[rows, winner] += 1
        strength[rows, winner] += np.abs(f)
    return votes, strength


def resolve_votes(votes: np.ndarray, strength: np.ndarray) -> np.ndarray:
    """Most votes wins; ties go to the larger strength, then the lowest index."""
    top = votes == votes.max(axis=1, keepdims=True)
    return np.argmax(np.where(top, strength, -np.inf), axis=1)


def predict_many(model: MulticlassModel, X) -> np.ndarray:
    votes, strength = pairwise_tallies(model, X)
    return resolve_votes(votes, strength)


def predict_one(model: MulticlassModel, x) -> int:
    """Class index (0-based) for a single feature vector."""
    x = np.asarray(x, dtype=np.float64).reshape(1, -1)
    return int(predict_many(model, x)[0])


def invalid_pixels(raster: Raster) -> np.ndarray:
    """Boolean mask over pixels (row-major) that are non-finite or nodata in any band."""
    pixels = raster.pixels()
    bad = ~np.all(np.isfinite(pixels), axis=1)
    if raster.nodata is not None:
        bad |= np.any(pixels == raster.nodata, axis=1)
    return bad


def classify_raster(model: MulticlassModel, raster: Raster) -> tuple[ClassRaster, int]:
    """Classify every pixel; returns the class map and the unclassified count."""
    if raster.bands != model.dimension:
        raise DimensionError(
            f"raster has {raster.bands} bands, model expects {model.dimension}")
    pixels = raster.pixels()
    bad = invalid_pixels(raster)
    codes = np.zeros(pixels.shape[0], dtype=np.uint8)
    if np.any(~bad):
        codes[~bad] = predict_many(model, pixels[~bad]) + 1
    n_bad = int(bad.sum())
    if n_bad:
        log.warning("%d pixels left unclassified (non-finite or nodata)", n_bad)
    return ClassRaster(codes.reshape(raster.rows, raster.cols), list(model.classes)), n_bad
