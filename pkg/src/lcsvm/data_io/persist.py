"""JSON persistence for multiclass and ensemble models.

Floats are written with Python's shortest round-trip repr, so a loaded model
reproduces the saved one's predictions exactly and save -> load -> save is a
byte-level fixpoint.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from ..errors import InputError, SchemaError
from ..kernels import KernelSpec
from .scaling import Scaler

FORMAT = "lcsvm-model"
VERSION = 1


def _floats(values) -> list:
    return [float(v) for v in np.asarray(values, dtype=np.float64).reshape(-1)]


def _multiclass_doc(model) -> dict:
    from ..multiclass import STRATEGY

    return {
        "strategy": STRATEGY,
        "classes": list(model.classes),
        "kernel": model.kernel.params(),
        "C": float(model.C),
        "scaler": {"means": _floats(model.scaler.means), "stds": _floats(model.scaler.stds)},
        "pairs": [
            {
                "positive": int(p.positive),
                "negative": int(p.negative),
                "bias": float(p.model.bias),
                "coefficients": _floats(p.model.coefficients),
                "support_vectors": [_floats(sv) for sv in p.model.support_vectors],
            }
            for p in model.pairs
        ],
    }


def model_to_dict(model) -> dict:
    from ..ensemble import EnsembleModel

    if isinstance(model, EnsembleModel):
        return {
            "format": FORMAT,
            "version": VERSION,
            "type": "ensemble",
            "tie_break": model.tie_break,
            "weights": None if model.weights is None else [float(w) for w in model.weights],
            "members": [{"name": name, "model": _multiclass_doc(m)} for name, m in model.members],
        }
    return {"format": FORMAT, "version": VERSION, "type": "multiclass", **_multiclass_doc(model)}


def dumps_model(model) -> str:
    return json.dumps(model_to_dict(model), indent=1, allow_nan=False) + "\n"


def save_model(model, path) -> None:
    Path(path).write_text(dumps_model(model))


def _get(doc, key, path, kind):
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError(f"{path}: missing field '{key}'")
    value = doc[key]
    ok = {
        "str": isinstance(value, str),
        "int": isinstance(value, int) and not isinstance(value, bool),
        "num": isinstance(value, (int, float)) and not isinstance(value, bool),
        "list": isinstance(value, list),
        "dict": isinstance(value, dict),
    }[kind]
    if not ok:
        raise SchemaError(f"{path}.{key}: expected {kind}, got {type(value).__name__}")
    if kind == "num" and not math.isfinite(value):
        raise SchemaError(f"{path}.{key}: must be finite")
    return value


def _vector(values, path) -> np.ndarray:
    if not isinstance(values, list):
        raise SchemaError(f"{path}: expected list, got {type(values).__name__}")
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise SchemaError(f"{path}[{i}]: expected a finite number")
    return np.array(values, dtype=np.float64)


def _num_list(doc, key, path) -> np.ndarray:
    return _vector(_get(doc, key, path, "list"), f"{path}.{key}")


def _multiclass_from_doc(doc, path):
    from ..multiclass import STRATEGY, MulticlassModel, PairModel
    from ..svm import BinaryModel

    strategy = _get(doc, "strategy", path, "str")
    if strategy != STRATEGY:
        raise SchemaError(f"{path}.strategy: unsupported strategy {strategy!r}")
    classes = _get(doc, "classes", path, "list")
    kernel_doc = _get(doc, "kernel", path, "dict")
    try:
        kernel = KernelSpec.from_params(kernel_doc)
    except (KeyError, TypeError, InputError) as exc:
        raise SchemaError(f"{path}.kernel: {exc}") from None
    C = _get(doc, "C", path, "num")
    scaler_doc = _get(doc, "scaler", path, "dict")
    means = _num_list(scaler_doc, "means", f"{path}.scaler")
    stds = _num_list(scaler_doc, "stds", f"{path}.scaler")
    if means.size != stds.size or np.any(stds <= 0):
        raise SchemaError(f"{path}.scaler: means/stds mismatch or nonpositive std")
    d = means.size
    k = len(classes)
    pairs = []
    for n, pair_doc in enumerate(_get(doc, "pairs", path, "list")):
        p = f"{path}.pairs[{n}]"
        pos = _get(pair_doc, "positive", p, "int")
        neg = _get(pair_doc, "negative", p, "int")
        if not (0 <= pos < k and 0 <= neg < k and pos != neg):
            raise SchemaError(f"{p}: class indices out of range")
        bias = float(_get(pair_doc, "bias", p, "num"))
        coefs = _num_list(pair_doc, "coefficients", p)
        svs_raw = _get(pair_doc, "support_vectors", p, "list")
        svs = np.zeros((len(svs_raw), d))
        for i, row in enumerate(svs_raw):
            vec = _vector(row, f"{p}.support_vectors[{i}]")
            if vec.size != d:
                raise SchemaError(f"{p}.support_vectors[{i}]: expected {d} values")
            svs[i] = vec
        if len(svs_raw) != coefs.size:
            raise SchemaError(f"{p}: support_vectors and coefficients differ in length")
        pairs.append(PairModel(pos, neg, BinaryModel(svs, coefs, bias, kernel)))
    if len(pairs) != k * (k - 1) // 2:
        raise SchemaError(f"{path}.pairs: expected {k * (k - 1) // 2} pairs, found {len(pairs)}")
    return MulticlassModel(tuple(classes), tuple(pairs), Scaler(means, stds), kernel, float(C))


def model_from_dict(doc):
    from ..ensemble import EnsembleModel

    if _get(doc, "format", "$", "str") != FORMAT:
        raise SchemaError("$.format: not an lcsvm model file")
    version = _get(doc, "version", "$", "int")
    if version != VERSION:
        raise SchemaError(f"$.version: unsupported model version {version} (expected {VERSION})")
    kind = _get(doc, "type", "$", "str")
    if kind == "multiclass":
        return _multiclass_from_doc(doc, "$")
    if kind != "ensemble":
        raise SchemaError(f"$.type: unknown model type {kind!r}")
    names, models = [], []
    for i, member in enumerate(_get(doc, "members", "$", "list")):
        p = f"$.members[{i}]"
        names.append(_get(member, "name", p, "str"))
        models.append(_multiclass_from_doc(_get(member, "model", p, "dict"), f"{p}.model"))
    weights = doc.get("weights")
    if weights is not None:
        weights = tuple(_num_list(doc, "weights", "$"))
    tie_break = _get(doc, "tie_break", "$", "str")
    try:
        return EnsembleModel(tuple(names), tuple(models), weights, tie_break)
    except InputError as exc:
        raise SchemaError(f"$: {exc}") from None


def loads_model(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"model file is not valid JSON: {exc}") from None
    return model_from_dict(doc)


def load_model(path):
    return loads_model(Path(path).read_text())
