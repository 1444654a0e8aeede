"""Per-band z-score standardization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError, InputError


@dataclass(frozen=True)
class Scaler:
    """Band means and population standard deviations.

    Constant bands (spread at rounding level) are stored with ``std = 1`` so
    they scale to zero.
    """

    means: np.ndarray
    stds: np.ndarray

    @property
    def dimension(self) -> int:
        return self.means.size

    def transform(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[-1] != self.dimension:
            raise DimensionError(
                f"scaler fitted on {self.dimension} bands, got {X.shape[-1]}")
        return (X - self.means) / self.stds


def fit_scaler(features) -> Scaler:
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1:
        raise InputError("fit_scaler needs an (n, d) array with n >= 1")
    means = X.mean(axis=0)
    stds = X.std(axis=0)  # population std (ddof=0)
    # A rounded mean can leave a constant band with a tiny nonzero std.
    exact = np.ptp(X, axis=0) == 0
    means = np.where(exact, X[0], means)
    flat = stds <= 1e-12 * np.abs(X).max(axis=0)
    stds = np.where(flat, 1.0, stds)
    return Scaler(means=means, stds=stds)


def apply_scaler(scaler: Scaler, x) -> np.ndarray:
    return scaler.transform(x)
