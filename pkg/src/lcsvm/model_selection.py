"""Stratified k-fold cross-validation and grid search scored by kappa."""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .data_io.samples import SampleSet
from .errors import InputError, LcsvmError
from .evaluation import build_error_matrix, kappa
from .kernels import LINEAR, POLYNOMIAL, RBF, KernelSpec
from .multiclass import predict_many, train_multiclass
from .svm import SolverSettings

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridSpec:
    c_values: tuple = (1.0, 10.0, 100.0)
    gamma_values: tuple = (0.1, 1.0, 10.0)
    coef0_values: tuple = (1.0,)
    degree: int = 2
    folds: int = 5
    seed: int = 0

    def __post_init__(self):
        if not self.c_values:
            raise InputError("grid needs at least one C value")
        for name, values, positive in (("C", self.c_values, True),
                                       ("gamma", self.gamma_values, True),
                                       ("coef0", self.coef0_values, False)):
            for v in values:
                if not math.isfinite(v) or v < 0 or (positive and v == 0):
                    raise InputError(f"invalid {name} grid value {v}")
        if self.folds < 2:
            raise InputError("cross-validation needs at least 2 folds")

    def cells(self, family: str) -> list:
        """(C, KernelSpec) for every grid cell, C-major."""
        if family == LINEAR:
            return [(float(c), KernelSpec.linear()) for c in self.c_values]
        if family == RBF:
            if not self.gamma_values:
                raise InputError("rbf grid needs gamma values")
            return [(float(c), KernelSpec.rbf(g))
                    for c, g in itertools.product(self.c_values, self.gamma_values)]
        if family == POLYNOMIAL:
            if not self.coef0_values:
                raise InputError("polynomial grid needs coef0 values")
            return [(float(c), KernelSpec.polynomial(self.degree, 1.0, r))
                    for c, r in itertools.product(self.c_values, self.coef0_values)]
        raise InputError(f"unknown kernel family {family!r}")


@dataclass
class CellResult:
    C: float
    kernel: KernelSpec
    fold_kappas: list = field(default_factory=list)
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None

    @property
    def mean_kappa(self) -> float:
        return float(np.mean(self.fold_kappas)) if self.fold_kappas else math.nan

    @property
    def std_kappa(self) -> float:
        return float(np.std(self.fold_kappas)) if self.fold_kappas else math.nan

    def params(self) -> dict:
        return {"C": self.C, **self.kernel.params()}

    def to_dict(self) -> dict:
        return {
            "params": self.params(),
            "mean_kappa": None if self.failed else self.mean_kappa,
            "std_kappa": None if self.failed else self.std_kappa,
            "fold_kappas": self.fold_kappas,
            "error": self.error,
        }


@dataclass
class CvResult:
    family: str
    folds: int
    seed: int
    cells: list

    @property
    def best(self) -> CellResult:
        return select_best(self.cells)

    @property
    def best_params(self) -> dict:
        return self.best.params()

    @property
    def mean_kappa(self) -> float:
        return self.best.mean_kappa

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "folds": self.folds,
            "seed": self.seed,
            "best_params": self.best_params,
            "mean_kappa": self.mean_kappa,
            "cells": [c.to_dict() for c in self.cells],
        }

    def to_text(self) -> str:
        lines = [f"{'C':>10} {'param':>10} {'mean kappa':>12} {'std':>8}"]
        for cell in self.cells:
            extra = cell.kernel.gamma if cell.kernel.kind == RBF else (
                cell.kernel.coef0 if cell.kernel.kind == POLYNOMIAL else math.nan)
            extra_txt = "-" if math.isnan(extra) else f"{extra:g}"
            if cell.failed:
                lines.append(f"{cell.C:>10g} {extra_txt:>10} {'failed':>12} {'':>8}")
            else:
                lines.append(f"{cell.C:>10g} {extra_txt:>10} "
                             f"{cell.mean_kappa:>12.4f} {cell.std_kappa:>8.4f}")
        best = self.best
        lines.append(f"best: C={best.C:g} {best.kernel.describe()} "
                     f"mean kappa {best.mean_kappa:.4f}")
        return "\n".join(lines) + "\n"


def stratified_kfold(labels, folds: int, seed: int, classes=None) -> list:
    """Split sample indices into ``folds`` class-stratified (train, validation) pairs.

    Each class is shuffled with a seeded generator and dealt round-robin; the
    dealing position carries over between classes so fold sizes also stay
    within one of each other.
    """
    labels = np.asarray(labels.labels if isinstance(labels, SampleSet) else labels,
                        dtype=np.int64)
    if folds < 2:
        raise InputError("need at least 2 folds")
    rng = np.random.default_rng(seed)
    assignment = np.empty(labels.size, dtype=np.int64)
    position = 0
    for cls in np.unique(labels):
        members = np.flatnonzero(labels == cls)
        if members.size < folds:
            name = classes[cls] if classes is not None else cls
            raise InputError(
                f"class {name!r} has {members.size} samples, fewer than {folds} folds")
        members = rng.permutation(members)
        assignment[members] = (position + np.arange(members.size)) % folds
        position = (position + members.size) % folds
    all_idx = np.arange(labels.size)
    return [(all_idx[assignment != f], all_idx[assignment == f]) for f in range(folds)]


def cell_fold_kappas(samples: SampleSet, kernel: KernelSpec, C: float, splits,
                     settings: SolverSettings | None = None) -> list:
    """Validation kappa of one parameter cell on each fold; the scaler is fitted per fold."""
    kappas = []
    for train_idx, val_idx in splits:
        model = train_multiclass(samples.subset(train_idx), kernel, C, settings)
        predicted = predict_many(model, samples.features[val_idx]) + 1
        matrix = build_error_matrix(samples.labels[val_idx] + 1, predicted, samples.classes)
        kappas.append(kappa(matrix))
    return kappas


def select_best(cells) -> CellResult:
    """Highest mean kappa; ties go to the smaller C, then the smaller gamma/coef0."""
    ok = [c for c in cells if not c.failed]
    if not ok:
        raise LcsvmError("every grid cell failed")

    def key(cell):
        second = cell.kernel.gamma if cell.kernel.kind == RBF else (
            cell.kernel.coef0 if cell.kernel.kind == POLYNOMIAL else 0.0)
        return (-cell.mean_kappa, cell.C, second)

    return min(ok, key=key)


def grid_search_cv(samples: SampleSet, family: str, grid: GridSpec,
                   settings: SolverSettings | None = None) -> CvResult:
    if len(np.unique(samples.labels)) < 2:
        raise InputError("grid search needs samples from at least two classes")
    splits = stratified_kfold(samples.labels, grid.folds, grid.seed, samples.classes)
    cells = []
    for C, spec in grid.cells(family):
        cell = CellResult(C, spec)
        try:
            cell.fold_kappas = cell_fold_kappas(samples, spec, C, splits, settings)
        except LcsvmError as exc:
            cell.error = str(exc)
            cell.fold_kappas = []
            log.warning("grid cell C=%g %s failed: %s", C, spec.describe(), exc)
        cells.append(cell)
    select_best(cells)  # raises when every cell failed
    return CvResult(family, grid.folds, grid.seed, cells)
