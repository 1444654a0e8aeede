"""Multi-band rasters and class maps in ENVI-style header + raw BSQ files.

Only the subset needed here is supported: ``interleave = bsq``, data type 1
(unsigned 8-bit) or 4 (32-bit float), and either byte order.  The binary file
sits next to the header with the ``.img`` extension.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import DimensionError, FormatError, InputError, UnsupportedFeatureError

UNCLASSIFIED = 0
UNCLASSIFIED_NAME = "unclassified"

_DTYPES = {1: np.dtype("u1"), 4: np.dtype("<f4")}
_DATA_SUFFIXES = (".img", ".dat", ".bsq", ".raw", "")


@dataclass
class Raster:
    """Band-sequential image, ``data`` shaped (bands, rows, cols)."""

    data: np.ndarray
    nodata: float | None = None
    band_names: list = field(default_factory=list)

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim == 2:
            data = data[None]
        if data.ndim != 3 or 0 in data.shape:
            raise DimensionError(f"raster data must be (bands, rows, cols), got {data.shape}")
        if data.dtype != np.uint8:
            data = data.astype(np.float32, copy=False)
        self.data = data

    @property
    def bands(self) -> int:
        return self.data.shape[0]

    @property
    def rows(self) -> int:
        return self.data.shape[1]

    @property
    def cols(self) -> int:
        return self.data.shape[2]

    def pixels(self) -> np.ndarray:
        """All pixel vectors as a (rows * cols, bands) float64 array, row-major."""
        return self.data.reshape(self.bands, -1).T.astype(np.float64)


@dataclass
class ClassRaster:
    """Class map: 0 is unclassified, 1..k index ``classes``."""

    values: np.ndarray
    classes: list

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 2 or 0 in values.shape:
            raise DimensionError(f"class raster must be 2-D, got shape {values.shape}")
        if values.dtype != np.uint8:
            if values.size and (values.min() < 0 or values.max() > 255):
                raise InputError("class codes must fit in an unsigned byte")
            values = values.astype(np.uint8)
        self.values = values
        self.classes = list(self.classes)
        if values.size and int(values.max()) > len(self.classes):
            raise InputError(
                f"class code {int(values.max())} exceeds class table size {len(self.classes)}")

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self):
        return self.values.shape


def _parse_header(text: str, path) -> dict:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "ENVI":
        raise FormatError(f"{path}: not an ENVI header (first line must be 'ENVI')")
    body = "\n".join(lines[1:])
    fields = {}
    for match in re.finditer(r"^\s*([^=\n]+?)\s*=\s*(\{[^}]*\}|[^\n]*)", body, re.M):
        key = match.group(1).strip().lower()
        value = match.group(2).strip()
        if value.startswith("{"):
            value = [v.strip() for v in value[1:-1].split(",") if v.strip()]
        fields[key] = value
    return fields


def _int_field(fields, key, path, default=None):
    if key not in fields:
        if default is not None:
            return default
        raise FormatError(f"{path}: header is missing '{key}'")
    try:
        return int(fields[key])
    except (TypeError, ValueError):
        raise FormatError(f"{path}: header field '{key}' is not an integer") from None


def _data_path(header_path: Path) -> Path:
    for suffix in _DATA_SUFFIXES:
        candidate = header_path.with_suffix(suffix)
        if candidate != header_path and candidate.exists():
            return candidate
    raise FormatError(f"{header_path}: no data file found next to the header")


def _read(header_path):
    header_path = Path(header_path)
    fields = _parse_header(header_path.read_text(), header_path)
    cols = _int_field(fields, "samples", header_path)
    rows = _int_field(fields, "lines", header_path)
    bands = _int_field(fields, "bands", header_path)
    dtype_code = _int_field(fields, "data type", header_path)
    byte_order = _int_field(fields, "byte order", header_path, default=0)
    offset = _int_field(fields, "header offset", header_path, default=0)
    interleave = str(fields.get("interleave", "bsq")).lower()
    if interleave != "bsq":
        raise UnsupportedFeatureError(f"{header_path}: interleave '{interleave}' is not supported")
    if dtype_code not in _DTYPES:
        raise UnsupportedFeatureError(f"{header_path}: data type {dtype_code} is not supported")
    if byte_order not in (0, 1):
        raise FormatError(f"{header_path}: byte order must be 0 or 1")
    if min(rows, cols, bands) < 1:
        raise FormatError(f"{header_path}: raster dimensions must be positive")
    dtype = _DTYPES[dtype_code]
    if byte_order == 1:
        dtype = dtype.newbyteorder(">")
    raw = _data_path(header_path).read_bytes()[offset:]
    expected = rows * cols * bands * dtype.itemsize
    if len(raw) != expected:
        raise FormatError(
            f"{header_path}: header describes {rows}x{cols}x{bands} "
            f"({expected} bytes) but the data file holds {len(raw)} bytes")
    data = np.frombuffer(raw, dtype=dtype).reshape(bands, rows, cols)
    return fields, data.astype(dtype.newbyteorder("<"))


def read_raster(header_path) -> Raster:
    fields, data = _read(header_path)
    nodata = fields.get("data ignore value")
    names = fields.get("band names") or []
    return Raster(data=data, nodata=float(nodata) if nodata is not None else None,
                  band_names=list(names) if isinstance(names, list) else [names])


def read_class_raster(header_path, classes=None) -> ClassRaster:
    """Read a one-band byte raster as a class map.

    Class names come from the header's ``class names`` entry (the first of
    which is the unclassified slot) unless ``classes`` is given.
    """
    fields, data = _read(header_path)
    if data.shape[0] != 1 or data.dtype != np.uint8:
        raise FormatError(f"{header_path}: class maps must be a single unsigned 8-bit band")
    if classes is None:
        names = fields.get("class names")
        if isinstance(names, list) and names:
            classes = names[1:]
        else:
            classes = [f"class{i}" for i in range(1, int(data.max()) + 1)]
    return ClassRaster(values=data[0], classes=classes)


def _write(header_path, data: np.ndarray, extra: list[str]) -> None:
    header_path = Path(header_path)
    if data.dtype == np.uint8:
        code = 1
    else:
        code = 4
        data = data.astype("<f4", copy=False)
    bands, rows, cols = data.shape
    lines = [
        "ENVI",
        f"samples = {cols}",
        f"lines = {rows}",
        f"bands = {bands}",
        "header offset = 0",
        f"data type = {code}",
        "interleave = bsq",
        "byte order = 0",
        *extra,
    ]
    header_path.with_suffix(".img").write_bytes(np.ascontiguousarray(data).tobytes())
    header_path.write_text("\n".join(lines) + "\n")


def write_raster(raster: Raster, header_path) -> None:
    extra = ["file type = ENVI Standard"]
    if raster.nodata is not None:
        extra.append(f"data ignore value = {raster.nodata!r}")
    if raster.band_names:
        extra.append("band names = {" + ", ".join(raster.band_names) + "}")
    _write(header_path, raster.data, extra)


def write_class_raster(class_raster: ClassRaster, header_path) -> None:
    for name in class_raster.classes:
        if any(ch in name for ch in ",{}\n"):
            raise InputError(f"class name {name!r} cannot be stored in an ENVI header")
    names = [UNCLASSIFIED_NAME, *class_raster.classes]
    extra = [
        "file type = ENVI Classification",
        f"classes = {len(names)}",
        "class names = {" + ", ".join(names) + "}",
    ]
    _write(header_path, class_raster.values[None], extra)
