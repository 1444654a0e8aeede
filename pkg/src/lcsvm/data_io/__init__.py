"""File formats, feature scaling and synthetic data."""

from .palette import ClassPalette, default_palette, read_palette, render_ppm, write_palette
from .persist import load_model, save_model
from .raster import (UNCLASSIFIED, ClassRaster, Raster, read_class_raster, read_raster,
                     write_class_raster, write_raster)
from .samples import SampleSet, read_samples_csv, write_samples_csv
from .scaling import Scaler, apply_scaler, fit_scaler
from .synthetic import SyntheticScene, gen_synthetic

__all__ = [
    "ClassPalette", "ClassRaster", "Raster", "SampleSet", "Scaler", "SyntheticScene",
    "UNCLASSIFIED", "apply_scaler", "default_palette", "fit_scaler", "gen_synthetic",
    "load_model", "read_class_raster", "read_palette", "read_raster", "read_samples_csv",
    "render_ppm", "save_model", "write_class_raster", "write_palette", "write_raster",
    "write_samples_csv",
]
