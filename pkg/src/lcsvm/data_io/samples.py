"""Training samples and their CSV format.

The file has a header ``b1,...,bd,label`` and one row per training pixel.
Labels are class names; class indices follow first appearance in the file.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionError, FormatError, InputError


@dataclass
class SampleSet:
    features: np.ndarray
    labels: np.ndarray
    classes: list
    band_names: list = field(default_factory=list)

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64).reshape(-1)
        self.classes = list(self.classes)
        if self.features.ndim != 2:
            raise DimensionError("sample features must be an (n, d) array")
        if self.features.shape[0] != self.labels.size:
            raise DimensionError(
                f"{self.features.shape[0]} feature rows but {self.labels.size} labels")
        if len(set(self.classes)) != len(self.classes):
            raise InputError("class names must be unique")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= len(self.classes)):
            raise InputError("sample label outside the class table")
        if self.band_names and len(self.band_names) != self.features.shape[1]:
            raise DimensionError("band_names length does not match feature dimension")

    @property
    def n(self) -> int:
        return self.labels.size

    @property
    def dimension(self) -> int:
        return self.features.shape[1]

    @property
    def k(self) -> int:
        return len(self.classes)

    def subset(self, indices) -> "SampleSet":
        indices = np.asarray(indices, dtype=np.int64)
        return SampleSet(self.features[indices], self.labels[indices], self.classes,
                         list(self.band_names))

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k)


def read_samples_csv(path) -> SampleSet:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise FormatError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if len(header) < 2 or header[-1] != "label":
        raise FormatError(f"{path}:1: header must be band columns followed by 'label'")
    d = len(header) - 1
    features, labels, classes = [], [], {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != d + 1:
            raise FormatError(f"{path}:{lineno}: expected {d + 1} fields, found {len(row)}")
        try:
            values = [float(cell) for cell in row[:d]]
        except ValueError:
            raise FormatError(f"{path}:{lineno}: non-numeric band value") from None
        if not all(math.isfinite(v) for v in values):
            raise FormatError(f"{path}:{lineno}: non-finite band value")
        name = row[d].strip()
        if not name:
            raise FormatError(f"{path}:{lineno}: empty label")
        features.append(values)
        labels.append(classes.setdefault(name, len(classes)))
    if not features:
        raise FormatError(f"{path}: no sample rows")
    return SampleSet(np.array(features), np.array(labels), list(classes), header[:d])


def write_samples_csv(samples: SampleSet, path) -> None:
    names = samples.band_names or [f"b{i + 1}" for i in range(samples.dimension)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([*names, "label"])
        for x, label in zip(samples.features, samples.labels):
            writer.writerow([repr(float(v)) for v in x] + [samples.classes[label]])
