"""Seeded synthetic multispectral scenes for desk-scale experiments.

Each class is a mixture of ``modes`` Gaussian blobs in band space, which keeps
class boundaries nonlinear.  Training samples and raster pixels are drawn from
the same blobs; the raster is a Voronoi mosaic of labeled regions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InputError
from .raster import ClassRaster, Raster
from .samples import SampleSet

LAND_COVER = ("water", "builtup", "thick_swamp", "light_swamp", "vegetation")

# Scene brightness offset; keeps band values positive like digital numbers.
_BASE_LEVEL = 60.0


@dataclass
class SyntheticScene:
    samples: SampleSet
    raster: Raster
    reference: ClassRaster
    mode_means: np.ndarray      # (k, modes, d)
    sample_modes: np.ndarray    # mode index of every training sample


def class_names(k: int) -> list:
    if k == len(LAND_COVER):
        return list(LAND_COVER)
    return [f"class{i + 1}" for i in range(k)]


def gen_synthetic(seed: int = 42, n_classes: int = 5, n_bands: int = 6, n_per_class: int = 60,
                  spread: float = 8.0, noise: float = 3.0, modes: int = 2,
                  rows: int = 64, cols: int = 64, regions_per_mode: int = 2) -> SyntheticScene:
    for name, value in (("n_classes", n_classes), ("n_bands", n_bands),
                        ("n_per_class", n_per_class), ("modes", modes), ("rows", rows),
                        ("cols", cols), ("regions_per_mode", regions_per_mode)):
        if int(value) != value or value < 1:
            raise InputError(f"{name} must be a positive integer, got {value}")
    if not spread > 0:
        raise InputError("spread must be positive")
    if not noise >= 0:
        raise InputError("noise must be nonnegative")

    rng = np.random.default_rng(seed)
    means = _BASE_LEVEL + spread * rng.standard_normal((n_classes, modes, n_bands))

    sample_modes = np.tile(np.arange(n_per_class) % modes, n_classes)
    labels = np.repeat(np.arange(n_classes), n_per_class)
    features = means[labels, sample_modes] + noise * rng.standard_normal((labels.size, n_bands))
    names = class_names(n_classes)
    samples = SampleSet(features, labels, names, [f"b{i + 1}" for i in range(n_bands)])

    n_regions = n_classes * modes * regions_per_mode
    centers = rng.random((n_regions, 2)) * (rows, cols)
    region_class = np.arange(n_regions) % n_classes
    region_mode = (np.arange(n_regions) // n_classes) % modes
    rr, cc = np.mgrid[0:rows, 0:cols]
    dist = (rr[..., None] - centers[:, 0]) ** 2 + (cc[..., None] - centers[:, 1]) ** 2
    region = np.argmin(dist, axis=-1)
    pixel_class = region_class[region]
    pixel_mode = region_mode[region]
    pixels = means[pixel_class, pixel_mode] + noise * rng.standard_normal((rows, cols, n_bands))
    raster = Raster(np.moveaxis(pixels, -1, 0), band_names=list(samples.band_names))
    reference = ClassRaster((pixel_class + 1).astype(np.uint8), names)
    return SyntheticScene(samples, raster, reference, means, sample_modes)
