"""Matplotlib figures written next to the text/CSV reports.

Everything renders through the Agg backend straight to files; nothing here
opens a window.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.patches import Patch  # noqa: E402

from .data_io.palette import ClassPalette, colorize, default_palette  # noqa: E402
from .data_io.raster import UNCLASSIFIED_NAME  # noqa: E402

RC = {
    "font.size": 9,
    "axes.titlesize": 10,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "figure.dpi": 100,
    "savefig.bbox": "tight",
    # Fixed metadata keeps repeated renders byte-identical.
    "svg.hashsalt": "lcsvm",
}
_SAVE_KW = {"metadata": {"Software": None}}


def _save(fig, path):
    kw = _SAVE_KW if str(path).lower().endswith(".png") else {}
    fig.savefig(path, **kw)
    plt.close(fig)


def plot_class_maps(maps: dict, path, palette: ClassPalette | None = None,
                    titles: dict | None = None) -> None:
    """Side-by-side class maps sharing one legend."""
    names = list(maps)
    classes = maps[names[0]].classes
    palette = palette or default_palette(classes)
    ncols = min(len(names), 4)
    nrows = math.ceil(len(names) / ncols)
    with plt.rc_context(RC):
        fig, axes = plt.subplots(nrows, ncols, figsize=(3.0 * ncols, 3.0 * nrows + 0.6),
                                 squeeze=False)
        for ax in axes.flat[len(names):]:
            ax.axis("off")
        for ax, name in zip(axes.flat, names):
            ax.imshow(colorize(maps[name], palette), interpolation="nearest")
            ax.set_title((titles or {}).get(name, name))
            ax.set_xticks([])
            ax.set_yticks([])
        table = palette.color_table(classes) / 255.0
        handles = [Patch(color=table[i], label=label)
                   for i, label in enumerate([UNCLASSIFIED_NAME, *classes])]
        fig.legend(handles=handles, loc="lower center", ncol=min(len(handles), 6),
                   frameon=False)
        fig.subplots_adjust(bottom=0.1)
        _save(fig, path)


def plot_error_matrix(report, path, title: str = "Error matrix") -> None:
    """Heatmap of counts, rows = reference and columns = predicted."""
    m = report.matrix
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(1.0 + 0.7 * m.k, 0.8 + 0.7 * m.k))
        ax.imshow(m.counts, cmap="Blues")
        peak = m.counts.max()
        for (r, c), v in np.ndenumerate(m.counts):
            ax.text(c, r, str(int(v)), ha="center", va="center",
                    color="white" if v > 0.6 * peak else "black")
        ax.set_xticks(range(m.k), m.classes, rotation=45, ha="right")
        ax.set_yticks(range(m.k), m.classes)
        ax.set_xlabel("predicted")
        ax.set_ylabel("reference")
        ax.set_title(f"{title}\nOA {report.overall_accuracy:.4f}  kappa {report.kappa:.4f}")
        _save(fig, path)


def plot_kappas(kappas: dict, path, reference: dict | None = None) -> None:
    """Bar chart of kappa per classifier, optionally beside a reference set."""
    names = list(kappas)
    x = np.arange(len(names))
    width = 0.38 if reference else 0.6
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(1.2 + 1.1 * len(names), 3.2))
        bars = ax.bar(x - (width / 2 if reference else 0), [kappas[n] for n in names], width,
                      label="this run")
        ax.bar_label(bars, fmt="%.4f", fontsize=7)
        if reference:
            ref_bars = ax.bar(x + width / 2, [reference.get(n, np.nan) for n in names], width,
                              label="reference", color="0.7")
            ax.bar_label(ref_bars, fmt="%.4f", fontsize=7)
            ax.legend(loc="lower right")
        ax.set_xticks(x, names)
        ax.set_ylabel("kappa")
        ax.set_ylim(0, 1.05)
        _save(fig, path)
