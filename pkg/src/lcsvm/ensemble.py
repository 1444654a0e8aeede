"""Committee of multiclass SVMs combined by simple or weighted majority vote.

Voting happens on per-member class maps (late fusion).  A code of 0
(unclassified) is an abstention; a pixel where every member abstains stays 0.
Ties among the top classes go to the earliest-listed member whose vote is
among them.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .data_io.raster import ClassRaster, Raster
from .data_io.samples import SampleSet
from .errors import DimensionError, InputError, LcsvmError
from .kernels import KernelSpec
from .multiclass import MulticlassModel, classify_raster, train_multiclass
from .svm import SolverSettings

log = logging.getLogger(__name__)

FIRST_LISTED = "first-listed-member"
TIE_POLICIES = (FIRST_LISTED,)


@dataclass(frozen=True)
class MemberSpec:
    name: str
    kernel: KernelSpec
    C: float


def default_member_specs(C: float = 10.0, gamma: float = 0.5, coef0: float = 1.0) -> list:
    """Linear, RBF and quadratic members, in that order."""
    return [
        MemberSpec("linear", KernelSpec.linear(), C),
        MemberSpec("rbf", KernelSpec.rbf(gamma), C),
        MemberSpec("quadratic", KernelSpec.quadratic(coef0=coef0), C),
    ]


@dataclass(frozen=True)
class EnsembleModel:
    names: tuple
    models: tuple
    weights: tuple | None = None
    tie_break: str = FIRST_LISTED

    def __post_init__(self):
        if len(self.names) != len(self.models):
            raise InputError("ensemble needs one name per member model")
        if len(self.models) < 2:
            raise InputError("an ensemble needs at least two members")
        if len(set(self.names)) != len(self.names):
            raise InputError("ensemble member names must be unique")
        first = self.models[0]
        for name, model in zip(self.names, self.models):
            if tuple(model.classes) != tuple(first.classes):
                raise InputError(f"member {name!r} has a different class table")
            if model.dimension != first.dimension:
                raise DimensionError(f"member {name!r} expects {model.dimension} features, "
                                     f"member {self.names[0]!r} expects {first.dimension}")
        if self.weights is not None:
            _check_weights(self.weights, len(self.models))
        if self.tie_break not in TIE_POLICIES:
            raise InputError(f"unknown tie policy {self.tie_break!r}")

    @property
    def classes(self):
        return self.models[0].classes

    @property
    def members(self):
        return list(zip(self.names, self.models))


@dataclass(frozen=True)
class VoteRecord:
    per_member: tuple
    winner: int
    was_tie: bool


def _check_weights(weights, count):
    if len(weights) != count:
        raise InputError(f"expected {count} weights, got {len(weights)}")
    for w in weights:
        if not (math.isfinite(w) and w > 0):
            raise InputError(f"vote weights must be finite and positive, got {w}")


def train_ensemble(samples: SampleSet, member_specs=None,
                   settings: SolverSettings | None = None, weights=None) -> EnsembleModel:
    member_specs = list(member_specs or default_member_specs())
    models = []
    for spec in member_specs:
        try:
            models.append(train_multiclass(samples, spec.kernel, spec.C, settings))
        except LcsvmError as exc:
            raise type(exc)(f"member {spec.name!r}: {exc}") from exc
    return EnsembleModel(tuple(s.name for s in member_specs), tuple(models),
                         None if weights is None else tuple(float(w) for w in weights))


def vote_record(predictions, weights=None, tie_break: str = FIRST_LISTED) -> VoteRecord:
    """Combine one prediction per member, listed in member order."""
    predictions = list(predictions)
    if not predictions:
        raise InputError("cannot vote over zero predictions")
    if tie_break not in TIE_POLICIES:
        raise InputError(f"unknown tie policy {tie_break!r}")
    if weights is None:
        weights = [1] * len(predictions)
    else:
        _check_weights(weights, len(predictions))
    totals = {}
    for label, w in zip(predictions, weights):
        totals[label] = totals.get(label, 0) + w
    best = max(totals.values())
    tied = [label for label, total in totals.items() if total == best]
    winner = next(label for label in predictions if label in tied)
    return VoteRecord(tuple(predictions), winner, len(tied) > 1)


def vote_simple(predictions, tie_break: str = FIRST_LISTED):
    return vote_record(predictions, None, tie_break).winner


def vote_weighted(predictions, weights, tie_break: str = FIRST_LISTED):
    return vote_record(predictions, weights, tie_break).winner


def vote_maps(maps, weights=None) -> tuple[np.ndarray, np.ndarray]:
    """Per-pixel vote over stacked class codes.

    Parameters
    ----------
    maps : sequence of 2-D uint8 arrays (or ClassRasters), in member order.
    weights : optional positive weight per map.

    Returns
    -------
    codes : (rows, cols) uint8 voted map.
    ties : (rows, cols) bool, True where the top total was shared.
    """
    arrays = [m.values if isinstance(m, ClassRaster) else np.asarray(m) for m in maps]
    if not arrays:
        raise InputError("cannot vote over zero maps")
    shape = arrays[0].shape
    for a in arrays:
        if a.shape != shape:
            raise DimensionError(f"class maps differ in shape: {shape} vs {a.shape}")
    if weights is None:
        weights = [1.0] * len(arrays)
    else:
        _check_weights(weights, len(arrays))
    stack = np.stack(arrays).reshape(len(arrays), -1).astype(np.int64)
    n_codes = int(stack.max()) + 1
    totals = np.zeros((n_codes, stack.shape[1]))
    for member, w in zip(stack, weights):
        totals[member, np.arange(stack.shape[1])] += w
    totals[0] = 0.0  # abstentions never win
    best = totals.max(axis=0)
    is_top = totals == best
    ties = is_top.sum(axis=0) > 1
    out = np.zeros(stack.shape[1], dtype=np.uint8)
    decided = np.zeros(stack.shape[1], dtype=bool)
    for member in stack:  # earliest member voting for a top class wins
        hit = ~decided & (member > 0) & is_top[member, np.arange(stack.shape[1])]
        out[hit] = member[hit]
        decided |= hit
    ties &= best > 0
    return out.reshape(shape), ties.reshape(shape)


def predict_ensemble(ensemble: EnsembleModel, raster: Raster):
    """Classify ``raster`` with every member and vote.

    Returns ``(final, member_maps)`` where ``member_maps`` maps member name to
    its ClassRaster.
    """
    member_maps = {}
    for name, model in ensemble.members:
        if raster.bands != model.dimension:
            raise DimensionError(
                f"member {name!r} expects {model.dimension} bands, raster has {raster.bands}")
        member_maps[name], _ = classify_raster(model, raster)
    codes, ties = vote_maps(list(member_maps.values()), ensemble.weights)
    log.info("ensemble vote: %d tied pixels", int(ties.sum()))
    return ClassRaster(codes, list(ensemble.classes)), member_maps


def disagreement(maps) -> np.ndarray:
    """Fraction of pixels on which each pair of maps differs."""
    arrays = [m.values if isinstance(m, ClassRaster) else np.asarray(m) for m in maps]
    for a in arrays[1:]:
        if a.shape != arrays[0].shape:
            raise DimensionError(f"class maps differ in shape: {arrays[0].shape} vs {a.shape}")
    m = len(arrays)
    out = np.zeros((m, m))
    for a in range(m):
        for b in range(a + 1, m):
            out[a, b] = out[b, a] = float(np.mean(arrays[a] != arrays[b]))
    return out
