"""Error matrices, overall accuracy, Cohen's kappa and per-class accuracies.

Rows are reference classes, columns are predicted classes.  Labels are class
codes 1..k; code 0 (unclassified) is excluded from the matrix and counted
separately.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMarginalsError, DimensionError, InputError


@dataclass(frozen=True)
class ErrorMatrix:
    counts: np.ndarray
    classes: tuple
    unclassified: int = 0

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 2 or counts.shape[0] != counts.shape[1]:
            raise DimensionError(f"error matrix must be square, got {counts.shape}")
        if counts.shape[0] != len(self.classes):
            raise DimensionError("error matrix size does not match the class table")
        if np.any(counts < 0):
            raise InputError("error matrix counts must be nonnegative")
        if counts.sum() <= 0:
            raise InputError("error matrix is empty")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "classes", tuple(self.classes))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def k(self) -> int:
        return len(self.classes)


@dataclass(frozen=True)
class AccuracyReport:
    matrix: ErrorMatrix
    overall_accuracy: float
    kappa: float
    producers: tuple
    users: tuple

    def to_dict(self) -> dict:
        def clean(values):
            return [None if math.isnan(v) else v for v in values]

        return {
            "orientation": "rows=reference, columns=predicted",
            "classes": list(self.matrix.classes),
            "matrix": self.matrix.counts.tolist(),
            "total": self.matrix.total,
            "unclassified": self.matrix.unclassified,
            "overall_accuracy": self.overall_accuracy,
            "kappa": self.kappa,
            "producers_accuracy": clean(self.producers),
            "users_accuracy": clean(self.users),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_text(self) -> str:
        return format_report(self)


def build_error_matrix(reference, predicted, classes) -> ErrorMatrix:
    """Tally reference vs predicted class codes.

    Pixels whose reference code is 0 carry no ground truth and are dropped.
    Pixels predicted as 0 are excluded from the counts and reported in
    ``unclassified``.
    """
    reference = np.asarray(reference).reshape(-1).astype(np.int64)
    predicted = np.asarray(predicted).reshape(-1).astype(np.int64)
    if reference.size != predicted.size:
        raise DimensionError(
            f"reference has {reference.size} labels, predicted has {predicted.size}")
    if reference.size == 0:
        raise InputError("no labels to compare")
    k = len(classes)
    for name, arr in (("reference", reference), ("predicted", predicted)):
        bad = (arr < 0) | (arr > k)
        if np.any(bad):
            raise InputError(f"{name} label {int(arr[bad][0])} is not in the class table (1..{k})")
    has_truth = reference > 0
    unclassified = int(np.sum(has_truth & (predicted == 0)))
    keep = has_truth & (predicted > 0)
    if not np.any(keep):
        raise InputError("no pixels with both a reference label and a prediction")
    counts = np.zeros((k, k), dtype=np.int64)
    np.add.at(counts, (reference[keep] - 1, predicted[keep] - 1), 1)
    return ErrorMatrix(counts, tuple(classes), unclassified)


def overall_accuracy(matrix: ErrorMatrix) -> float:
    return float(np.trace(matrix.counts) / matrix.total)


def kappa(matrix: ErrorMatrix) -> float:
    """Cohen's kappa, ``(N d - m) / (N^2 - m)`` with ``m = sum(row_i col_i)``.

    Computed in exact integer arithmetic before the final division.
    """
    counts = matrix.counts
    n = int(counts.sum())
    d = int(np.trace(counts))
    m = sum(int(r) * int(c) for r, c in zip(counts.sum(axis=1), counts.sum(axis=0)))
    denom = n * n - m
    if denom == 0:
        raise DegenerateMarginalsError("chance agreement is total; kappa is undefined")
    return (n * d - m) / denom


def per_class_accuracy(matrix: ErrorMatrix) -> tuple[tuple, tuple]:
    """Producer's (row) and user's (column) accuracy; NaN where undefined."""
    diag = np.diag(matrix.counts).astype(float)
    rows = matrix.counts.sum(axis=1)
    cols = matrix.counts.sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        producers = np.where(rows > 0, diag / rows, np.nan)
        users = np.where(cols > 0, diag / cols, np.nan)
    return tuple(float(v) for v in producers), tuple(float(v) for v in users)


def assess(reference, predicted, classes) -> AccuracyReport:
    matrix = build_error_matrix(reference, predicted, classes)
    return report_for(matrix)


def report_for(matrix: ErrorMatrix) -> AccuracyReport:
    producers, users = per_class_accuracy(matrix)
    return AccuracyReport(matrix, overall_accuracy(matrix), kappa(matrix), producers, users)


def _fmt(value: float) -> str:
    return "n/a" if math.isnan(value) else f"{value:.4f}"


def format_report(report: AccuracyReport) -> str:
    m = report.matrix
    width = max(8, *(len(c) for c in m.classes), len(str(m.counts.max()))) + 1
    lines = ["Error matrix (rows = reference, columns = predicted)"]
    lines.append(" " * width + "".join(f"{c:>{width}}" for c in m.classes))
    for name, row in zip(m.classes, m.counts):
        lines.append(f"{name:<{width}}" + "".join(f"{int(v):>{width}}" for v in row))
    lines.append(f"Pixels compared: {m.total}")
    lines.append(f"Unclassified: {m.unclassified}")
    lines.append(f"Overall accuracy: {report.overall_accuracy:.4f}")
    lines.append(f"Kappa: {report.kappa:.4f}")
    lines.append(f"{'class':<{width}}{'producer':>10}{'user':>10}")
    for name, p, u in zip(m.classes, report.producers, report.users):
        lines.append(f"{name:<{width}}{_fmt(p):>10}{_fmt(u):>10}")
    return "\n".join(lines) + "\n"
