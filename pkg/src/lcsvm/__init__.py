"""Kernel SVM committees for pixel-based land-cover classification."""

from .data_io import (gen_synthetic, load_model, read_class_raster, read_raster,
                      read_samples_csv, save_model, write_class_raster)
from .ensemble import (EnsembleModel, MemberSpec, default_member_specs, disagreement,
                       predict_ensemble, train_ensemble, vote_simple, vote_weighted)
from .evaluation import assess, build_error_matrix, kappa, overall_accuracy, per_class_accuracy
from .kernels import KernelSpec, kernel_eval, kernel_matrix
from .multiclass import MulticlassModel, classify_raster, predict_one, train_multiclass
from .svm import (BinaryModel, BinaryProblem, SolverSettings, decision_value, predict_binary,
                  train_binary)

__version__ = "0.1.0"

__all__ = [
    "BinaryModel", "BinaryProblem", "EnsembleModel", "KernelSpec", "MemberSpec",
    "MulticlassModel", "SolverSettings", "assess", "build_error_matrix", "classify_raster",
    "decision_value", "default_member_specs", "disagreement", "gen_synthetic", "kappa", "kernel_eval",
    "kernel_matrix", "load_model", "overall_accuracy", "per_class_accuracy", "predict_binary",
    "predict_ensemble", "predict_one", "read_class_raster", "read_raster",
    "read_samples_csv", "save_model", "train_binary", "train_ensemble", "train_multiclass",
    "vote_simple", "vote_weighted", "write_class_raster",
]
