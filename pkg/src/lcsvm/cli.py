"""Command-line front end: generate data, tune, train, classify, vote, evaluate, render."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .data_io import (default_palette, gen_synthetic, load_model, read_class_raster,
                      read_palette, read_raster, read_samples_csv, render_ppm, save_model,
                      write_class_raster, write_palette, write_raster, write_samples_csv)
from .data_io.raster import ClassRaster
from .ensemble import (EnsembleModel, MemberSpec, disagreement, predict_ensemble,
                       train_ensemble, vote_maps)
from .errors import InputError, LcsvmError
from .evaluation import assess
from .kernels import POLYNOMIAL, KernelSpec
from .model_selection import GridSpec, cell_fold_kappas, grid_search_cv, stratified_kfold
from .multiclass import classify_raster, train_multiclass
from .svm import SolverSettings

log = logging.getLogger("lcsvm")

KERNEL_CHOICES = ("linear", "rbf", "quadratic", "polynomial")


def _float_list(text: str) -> tuple:
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("list must not be empty")
    return values


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not value > 0 or value == float("inf"):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return value


def _nonneg_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not value >= 0 or value == float("inf"):
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {text!r}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be nonnegative")
    return value


def _kernel_from_args(kind: str, args) -> KernelSpec:
    if kind == "linear":
        return KernelSpec.linear()
    if kind == "rbf":
        return KernelSpec.rbf(args.gamma)
    degree = 2 if kind == "quadratic" else args.degree
    return KernelSpec.polynomial(degree, args.scale, args.coef0)


def _settings(args) -> SolverSettings:
    return SolverSettings(kkt_tolerance=args.tol, max_passes=args.max_passes)


def _add_solver_flags(p):
    p.add_argument("--tol", type=_positive_float, default=1e-3,
                   help="KKT tolerance of the SMO solver")
    p.add_argument("--max-passes", type=_positive_int, default=None,
                   help="solver cap in passes of n pair updates (default max(1000, 10n))")


def _add_kernel_params(p):
    p.add_argument("--gamma", type=_positive_float, default=0.5, help="RBF width parameter")
    p.add_argument("--degree", type=_positive_int, default=2,
                   help="polynomial degree (kernel 'polynomial' only)")
    p.add_argument("--scale", type=_positive_float, default=1.0, help="polynomial scale")
    p.add_argument("--coef0", type=_nonneg_float, default=1.0, help="polynomial offset")


def _add_scene_flags(p):
    p.add_argument("--seed", type=_seed, default=42, help="random seed")
    p.add_argument("--classes", type=_positive_int, default=5, help="number of classes")
    p.add_argument("--bands", type=_positive_int, default=6, help="number of bands")
    p.add_argument("--per-class", type=_positive_int, default=60,
                   help="training samples per class")
    p.add_argument("--rows", type=_positive_int, default=64, help="scene rows")
    p.add_argument("--cols", type=_positive_int, default=64, help="scene columns")
    p.add_argument("--spread", type=_positive_float, default=8.0,
                   help="std of class-mode means around the base level")
    p.add_argument("--noise", type=_nonneg_float, default=3.0, help="within-mode noise std")
    p.add_argument("--modes", type=_positive_int, default=2, help="Gaussian modes per class")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog="lcsvm", formatter_class=fmt,
                                     description="Kernel SVM committees for land-cover maps.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    p = sub.add_parser("gensynth", formatter_class=fmt,
                       help="write a seeded synthetic scene, training CSV and reference map")
    p.add_argument("--out-dir", required=True, type=Path, help="output directory")
    _add_scene_flags(p)

    p = sub.add_parser("cv", formatter_class=fmt,
                       help="grid search C and kernel parameters by stratified k-fold CV")
    p.add_argument("--samples", required=True, type=Path, help="training CSV")
    p.add_argument("--kernel", choices=KERNEL_CHOICES, default="rbf", help="kernel family")
    p.add_argument("--c-grid", type=_float_list, default=(1.0, 10.0, 100.0), help="C values")
    p.add_argument("--gamma-grid", type=_float_list, default=(0.1, 1.0, 10.0),
                   help="RBF gamma values")
    p.add_argument("--coef0-grid", type=_float_list, default=(1.0,),
                   help="polynomial coef0 values")
    p.add_argument("--degree", type=_positive_int, default=2,
                   help="polynomial degree (kernel 'polynomial' only)")
    p.add_argument("--folds", type=_positive_int, default=5, help="number of folds")
    p.add_argument("--seed", type=_seed, default=0, help="fold shuffling seed")
    p.add_argument("--json", type=Path, default=None, help="write the CV table as JSON")
    _add_solver_flags(p)

    p = sub.add_parser("train", formatter_class=fmt, help="train one multiclass SVM")
    p.add_argument("--samples", required=True, type=Path, help="training CSV")
    p.add_argument("--kernel", choices=KERNEL_CHOICES, default="rbf", help="kernel family")
    p.add_argument("--C", type=_positive_float, default=10.0, help="soft-margin cost")
    _add_kernel_params(p)
    p.add_argument("--out", required=True, type=Path, help="model JSON path")
    _add_solver_flags(p)

    p = sub.add_parser("classify", formatter_class=fmt,
                       help="classify a raster with a saved model or ensemble")
    p.add_argument("--model", required=True, type=Path, help="model JSON path")
    p.add_argument("--raster", required=True, type=Path, help="input raster header (.hdr)")
    p.add_argument("--out", required=True, type=Path, help="output class map header (.hdr)")
    p.add_argument("--members-dir", type=Path, default=None,
                   help="for ensembles, also write each member's map here")

    p = sub.add_parser("ensemble-train", formatter_class=fmt,
                       help="train the linear / RBF / quadratic committee")
    p.add_argument("--samples", required=True, type=Path, help="training CSV")
    p.add_argument("--out", required=True, type=Path, help="ensemble JSON path")
    p.add_argument("--C", type=_positive_float, default=10.0, help="cost for every member")
    p.add_argument("--linear-C", type=_positive_float, default=None,
                   help="cost override for the linear member")
    p.add_argument("--rbf-C", type=_positive_float, default=None,
                   help="cost override for the RBF member")
    p.add_argument("--quadratic-C", type=_positive_float, default=None,
                   help="cost override for the quadratic member")
    p.add_argument("--gamma", type=_positive_float, default=0.5, help="RBF width parameter")
    p.add_argument("--coef0", type=_nonneg_float, default=1.0, help="quadratic offset")
    p.add_argument("--weights", default="none",
                   help="'none', 'cv-kappa', or comma-separated positive weights")
    p.add_argument("--folds", type=_positive_int, default=5, help="folds for --weights cv-kappa")
    p.add_argument("--seed", type=_seed, default=0, help="fold seed for --weights cv-kappa")
    _add_solver_flags(p)

    p = sub.add_parser("vote", formatter_class=fmt,
                       help="majority-vote two or more class maps pixel by pixel")
    p.add_argument("maps", nargs="+", type=Path, help="class map headers, in member order")
    p.add_argument("--out", required=True, type=Path, help="output class map header")
    p.add_argument("--weights", type=_float_list, default=None,
                   help="comma-separated positive weights, one per map")

    p = sub.add_parser("evaluate", formatter_class=fmt,
                       help="error matrix, overall accuracy and kappa of a class map")
    p.add_argument("--reference", required=True, type=Path, help="reference class map header")
    p.add_argument("--predicted", required=True, type=Path, help="predicted class map header")
    p.add_argument("--json", type=Path, default=None, help="also write the report as JSON")
    p.add_argument("--figure", type=Path, default=None,
                   help="also render the error matrix as an image (e.g. .png)")

    p = sub.add_parser("render", formatter_class=fmt, help="render a class map to binary PPM")
    p.add_argument("--map", required=True, type=Path, help="class map header")
    p.add_argument("--palette", type=Path, default=None,
                   help="palette file of 'classname R G B' lines (default built-in colors)")
    p.add_argument("--out", required=True, type=Path, help="output .ppm path")
    p.add_argument("--png", type=Path, default=None, help="also write a captioned figure")

    p = sub.add_parser("report", formatter_class=fmt,
                       help="run the full seeded experiment and write tables and figures")
    p.add_argument("--out-dir", required=True, type=Path, help="output directory")
    _add_scene_flags(p)
    p.add_argument("--C", type=_positive_float, default=10.0, help="cost for every member")
    p.add_argument("--gamma", type=_positive_float, default=0.5, help="RBF width parameter")
    p.add_argument("--coef0", type=_nonneg_float, default=1.0, help="quadratic offset")
    p.add_argument("--no-figures", action="store_true", help="skip the matplotlib figures")
    _add_solver_flags(p)
    return parser


def _member_specs(args) -> list:
    return [
        MemberSpec("linear", KernelSpec.linear(), args.linear_C or args.C),
        MemberSpec("rbf", KernelSpec.rbf(args.gamma), args.rbf_C or args.C),
        MemberSpec("quadratic", KernelSpec.quadratic(coef0=args.coef0),
                   args.quadratic_C or args.C),
    ]


def _write_scene(scene, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    write_samples_csv(scene.samples, out_dir / "train.csv")
    write_raster(scene.raster, out_dir / "scene.hdr")
    write_class_raster(scene.reference, out_dir / "reference.hdr")
    write_palette(default_palette(scene.samples.classes), out_dir / "palette.txt")


def _scene_from_args(args):
    return gen_synthetic(args.seed, args.classes, args.bands, args.per_class, args.spread,
                         args.noise, args.modes, args.rows, args.cols)


def cmd_gensynth(args) -> int:
    scene = _scene_from_args(args)
    _write_scene(scene, args.out_dir)
    print(f"wrote {scene.samples.n} samples ({scene.samples.k} classes, "
          f"{scene.samples.dimension} bands) and a {scene.raster.rows}x{scene.raster.cols} "
          f"scene to {args.out_dir}")
    return 0


def cmd_cv(args) -> int:
    samples = read_samples_csv(args.samples)
    family = POLYNOMIAL if args.kernel in ("quadratic", "polynomial") else args.kernel
    degree = 2 if args.kernel == "quadratic" else args.degree
    grid = GridSpec(args.c_grid, args.gamma_grid, args.coef0_grid, degree, args.folds, args.seed)
    result = grid_search_cv(samples, family, grid, _settings(args))
    sys.stdout.write(result.to_text())
    if args.json:
        args.json.write_text(json.dumps(result.to_dict(), indent=2) + "\n")
    return 0


def cmd_train(args) -> int:
    samples = read_samples_csv(args.samples)
    kernel = _kernel_from_args(args.kernel, args)
    model = train_multiclass(samples, kernel, args.C, _settings(args))
    save_model(model, args.out)
    n_sv = sum(p.model.coefficients.size for p in model.pairs)
    print(f"trained {kernel.describe()} C={args.C:g}: {len(model.pairs)} pairwise models, "
          f"{n_sv} support vectors -> {args.out}")
    return 0


def cmd_classify(args) -> int:
    model = load_model(args.model)
    raster = read_raster(args.raster)
    if isinstance(model, EnsembleModel):
        final, members = predict_ensemble(model, raster)
        _, ties = vote_maps(list(members.values()), model.weights)
        if args.members_dir:
            args.members_dir.mkdir(parents=True, exist_ok=True)
            for name, cmap in members.items():
                write_class_raster(cmap, args.members_dir / f"{name}.hdr")
        write_class_raster(final, args.out)
        print(f"ensemble of {len(members)} members -> {args.out} "
              f"({int(ties.sum())} tied pixels)")
        return 0
    cmap, n_bad = classify_raster(model, raster)
    write_class_raster(cmap, args.out)
    print(f"classified {raster.rows}x{raster.cols} pixels -> {args.out} "
          f"({n_bad} unclassified)")
    return 0


def _parse_weights(text: str, count: int):
    if text == "none":
        return None
    try:
        weights = [float(w) for w in text.split(",")]
    except ValueError:
        raise InputError(f"--weights must be 'none', 'cv-kappa' or numbers, got {text!r}")
    if len(weights) != count:
        raise InputError(f"expected {count} weights, got {len(weights)}")
    return weights


def cmd_ensemble_train(args) -> int:
    samples = read_samples_csv(args.samples)
    specs = _member_specs(args)
    settings = _settings(args)
    if args.weights == "cv-kappa":
        splits = stratified_kfold(samples.labels, args.folds, args.seed, samples.classes)
        weights = []
        for spec in specs:
            mean = float(np.mean(cell_fold_kappas(samples, spec.kernel, spec.C, splits, settings)))
            if not mean > 0:
                raise InputError(f"member {spec.name!r} has CV kappa {mean:.4f}; "
                                 "cannot use it as a vote weight")
            print(f"{spec.name}: CV kappa {mean:.4f}")
            weights.append(mean)
    else:
        weights = _parse_weights(args.weights, len(specs))
    ensemble = train_ensemble(samples, specs, settings, weights)
    save_model(ensemble, args.out)
    print(f"trained ensemble [{', '.join(ensemble.names)}] -> {args.out}")
    return 0


def cmd_vote(args) -> int:
    if len(args.maps) < 2:
        raise InputError("vote needs at least two class maps")
    maps = [read_class_raster(p) for p in args.maps]
    for p, m in zip(args.maps[1:], maps[1:]):
        if m.shape != maps[0].shape:
            raise InputError(f"{p}: shape {m.shape} differs from {maps[0].shape}")
    codes, ties = vote_maps(maps, args.weights)
    write_class_raster(ClassRaster(codes, maps[0].classes), args.out)
    print(f"voted {len(maps)} maps -> {args.out} ({int(ties.sum())} tied pixels)")
    return 0


def cmd_evaluate(args) -> int:
    reference = read_class_raster(args.reference)
    predicted = read_class_raster(args.predicted)
    if reference.shape != predicted.shape:
        raise InputError(f"reference {reference.shape} and predicted {predicted.shape} "
                         "differ in shape")
    report = assess(reference.values, predicted.values, reference.classes)
    sys.stdout.write(report.to_text())
    if args.json:
        args.json.write_text(report.to_json())
    if args.figure:
        from .plotting import plot_error_matrix

        plot_error_matrix(report, args.figure, title=args.predicted.stem)
    return 0


def cmd_render(args) -> int:
    cmap = read_class_raster(args.map)
    palette = read_palette(args.palette) if args.palette else default_palette(cmap.classes)
    render_ppm(cmap, palette, args.out)
    if args.png:
        from .plotting import plot_class_maps

        plot_class_maps({args.map.stem: cmap}, args.png, palette)
    print(f"rendered {cmap.rows}x{cmap.cols} map -> {args.out}")
    return 0


def cmd_report(args) -> int:
    out = args.out_dir
    scene = _scene_from_args(args)
    _write_scene(scene, out)
    args.linear_C = args.rbf_C = args.quadratic_C = None
    ensemble = train_ensemble(scene.samples, _member_specs(args), _settings(args))
    save_model(ensemble, out / "ensemble.json")
    final, members = predict_ensemble(ensemble, scene.raster)
    _, ties = vote_maps(list(members.values()))
    maps = {**members, "ensemble": final}
    reports = {}
    for name, cmap in maps.items():
        write_class_raster(cmap, out / f"{name}.hdr")
        render_ppm(cmap, default_palette(cmap.classes), out / f"{name}.ppm")
        reports[name] = assess(scene.reference.values, cmap.values, cmap.classes)
        (out / f"{name}_report.txt").write_text(reports[name].to_text())
    with open(out / "kappas.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["classifier", "overall_accuracy", "kappa"])
        for name, rep in reports.items():
            writer.writerow([name, f"{rep.overall_accuracy:.4f}", f"{rep.kappa:.4f}"])
    dis = disagreement(list(members.values()))
    with open(out / "disagreement.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["member", *members])
        for name, row in zip(members, dis):
            writer.writerow([name, *(f"{v:.4f}" for v in row)])
    if not args.no_figures:
        from .plotting import plot_class_maps, plot_error_matrix, plot_kappas

        titles = {n: f"{n} (kappa {r.kappa:.4f})" for n, r in reports.items()}
        plot_class_maps({"reference": scene.reference, **maps}, out / "maps.png",
                        titles=titles)
        plot_kappas({n: r.kappa for n, r in reports.items()}, out / "kappas.png")
        for name, rep in reports.items():
            plot_error_matrix(rep, out / f"{name}_matrix.png", title=name)
    print(f"{'classifier':<12}{'OA':>8}{'kappa':>8}")
    for name, rep in reports.items():
        print(f"{name:<12}{rep.overall_accuracy:>8.4f}{rep.kappa:>8.4f}")
    print(f"tied pixels in vote: {int(ties.sum())}")
    return 0


COMMANDS = {
    "gensynth": cmd_gensynth,
    "cv": cmd_cv,
    "train": cmd_train,
    "classify": cmd_classify,
    "ensemble-train": cmd_ensemble_train,
    "vote": cmd_vote,
    "evaluate": cmd_evaluate,
    "render": cmd_render,
    "report": cmd_report,
}


def dispatch(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (LcsvmError, ValueError, OSError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"lcsvm {args.command}: error: {msg}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
