"""Class color palettes and binary PPM (P6) rendering of class maps."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import FormatError, InputError
from .raster import UNCLASSIFIED_NAME, ClassRaster

# Colors for the usual land-cover names; anything else falls back to _CYCLE.
_NAMED = {
    UNCLASSIFIED_NAME: (0, 0, 0),
    "water": (0, 0, 255),
    "builtup": (220, 20, 60),
    "built_up": (220, 20, 60),
    "thick_swamp": (0, 100, 0),
    "light_swamp": (154, 205, 50),
    "vegetation": (34, 139, 34),
    "other_vegetation": (107, 142, 35),
}
_CYCLE = [
    (31, 119, 180), (255, 127, 14), (44, 160, 44), (214, 39, 40), (148, 103, 189),
    (140, 86, 75), (227, 119, 194), (127, 127, 127), (188, 189, 34), (23, 190, 207),
]


@dataclass
class ClassPalette:
    """RGB triple per class name, including the unclassified slot."""

    colors: dict

    def color_table(self, classes) -> np.ndarray:
        """(k + 1, 3) uint8 lookup table indexed by class code."""
        table = np.zeros((len(classes) + 1, 3), dtype=np.uint8)
        for code, name in enumerate([UNCLASSIFIED_NAME, *classes]):
            if name not in self.colors:
                raise InputError(f"palette has no color for class {name!r}")
            table[code] = self.colors[name]
        return table


def default_palette(classes) -> ClassPalette:
    colors = {UNCLASSIFIED_NAME: _NAMED[UNCLASSIFIED_NAME]}
    for i, name in enumerate(classes):
        colors[name] = _NAMED.get(name, _CYCLE[i % len(_CYCLE)])
    return ClassPalette(colors)


def read_palette(path) -> ClassPalette:
    """Parse ``classname R G B`` lines; ``#`` starts a comment."""
    colors = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise FormatError(f"{path}:{lineno}: expected 'classname R G B'")
        try:
            rgb = tuple(int(p) for p in parts[1:])
        except ValueError:
            raise FormatError(f"{path}:{lineno}: color components must be integers") from None
        if any(not 0 <= c <= 255 for c in rgb):
            raise FormatError(f"{path}:{lineno}: color components must be in 0..255")
        colors[parts[0]] = rgb
    colors.setdefault(UNCLASSIFIED_NAME, _NAMED[UNCLASSIFIED_NAME])
    return ClassPalette(colors)


def write_palette(palette: ClassPalette, path) -> None:
    lines = [f"{name} {r} {g} {b}" for name, (r, g, b) in palette.colors.items()]
    Path(path).write_text("\n".join(lines) + "\n")


def colorize(class_raster: ClassRaster, palette: ClassPalette) -> np.ndarray:
    """(rows, cols, 3) uint8 RGB image of a class map."""
    return palette.color_table(class_raster.classes)[class_raster.values]


def render_ppm(class_raster: ClassRaster, palette: ClassPalette, path) -> None:
    rgb = colorize(class_raster, palette)
    header = f"P6\n{class_raster.cols} {class_raster.rows}\n255\n".encode("ascii")
    Path(path).write_bytes(header + rgb.tobytes())
