"""Kernel functions and Gram matrices.

Three kernels are supported:

* linear      ``k(x, y) = x . y``
* rbf         ``k(x, y) = exp(-gamma * ||x - y||^2)``
* polynomial  ``k(x, y) = (scale * (x . y) + coef0) ** degree``

The "quadratic" member of the committee is ``KernelSpec.polynomial(degree=2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InputError

LINEAR = "linear"
RBF = "rbf"
POLYNOMIAL = "polynomial"
KINDS = (LINEAR, RBF, POLYNOMIAL)

# Bound on the size of the (rows, cols, d) temporary used by cross_kernel.
_CHUNK_ELEMENTS = 1 << 22


@dataclass(frozen=True)
class KernelSpec:
    """Tagged kernel description.

    Only the parameters relevant to ``kind`` are meaningful; the others keep
    their defaults and are ignored.
    """

    kind: str = LINEAR
    gamma: float = 1.0
    degree: int = 2
    scale: float = 1.0
    coef0: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown kernel kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == RBF and not (math.isfinite(self.gamma) and self.gamma > 0):
            raise InputError(f"rbf gamma must be positive and finite, got {self.gamma}")
        if self.kind == POLYNOMIAL:
            if int(self.degree) != self.degree or self.degree < 1:
                raise InputError(f"polynomial degree must be an integer >= 1, got {self.degree}")
            if not (math.isfinite(self.scale) and self.scale > 0):
                raise InputError(f"polynomial scale must be positive, got {self.scale}")
            if not (math.isfinite(self.coef0) and self.coef0 >= 0):
                raise InputError(f"polynomial coef0 must be nonnegative, got {self.coef0}")

    @classmethod
    def linear(cls) -> "KernelSpec":
        return cls(LINEAR)

    @classmethod
    def rbf(cls, gamma: float) -> "KernelSpec":
        return cls(RBF, gamma=float(gamma))

    @classmethod
    def polynomial(cls, degree: int = 2, scale: float = 1.0, coef0: float = 1.0) -> "KernelSpec":
        return cls(POLYNOMIAL, degree=int(degree), scale=float(scale), coef0=float(coef0))

    @classmethod
    def quadratic(cls, scale: float = 1.0, coef0: float = 1.0) -> "KernelSpec":
        return cls.polynomial(2, scale, coef0)

    def params(self) -> dict:
        """The parameters that matter for this kind, as a plain dict."""
        if self.kind == RBF:
            return {"kind": RBF, "gamma": self.gamma}
        if self.kind == POLYNOMIAL:
            return {"kind": POLYNOMIAL, "degree": self.degree, "scale": self.scale, "coef0": self.coef0}
        return {"kind": LINEAR}

    @classmethod
    def from_params(cls, params: dict) -> "KernelSpec":
        params = dict(params)
        kind = params.pop("kind")
        return cls(kind, **params)

    def describe(self) -> str:
        if self.kind == RBF:
            return f"rbf(gamma={self.gamma:g})"
        if self.kind == POLYNOMIAL:
            return f"poly(degree={self.degree}, scale={self.scale:g}, coef0={self.coef0:g})"
        return "linear"


def _as_vector(x) -> np.ndarray:
    return np.asarray(x, dtype=np.float64).reshape(-1)


def _as_matrix(X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise DimensionError(f"expected a 2-D array of feature vectors, got shape {X.shape}")
    return X


def _from_dot(spec: KernelSpec, dot):
    if spec.kind == LINEAR:
        return dot
    return (spec.scale * dot + spec.coef0) ** spec.degree


def kernel_eval(spec: KernelSpec, x, y) -> float:
    """Evaluate the kernel on a single pair of feature vectors."""
    x = _as_vector(x)
    y = _as_vector(y)
    if x.shape != y.shape:
        raise DimensionError(f"feature vectors differ in length: {x.size} vs {y.size}")
    # Same arithmetic path as the Gram matrix, so entries agree bit for bit.
    return float(cross_kernel(spec, x[None, :], y[None, :])[0, 0])


def cross_kernel(spec: KernelSpec, A, B) -> np.ndarray:
    """Kernel values between every row of ``A`` and every row of ``B``.

    Each entry is an elementwise product/difference reduced over the last
    axis, never a BLAS product, so a value does not depend on how many rows of
    ``A`` are evaluated together.
    """
    A = _as_matrix(A)
    B = _as_matrix(B)
    if A.shape[1] != B.shape[1]:
        raise DimensionError(f"feature dimension mismatch: {A.shape[1]} vs {B.shape[1]}")
    out = np.empty((A.shape[0], B.shape[0]))
    step = max(1, _CHUNK_ELEMENTS // max(1, B.shape[0] * B.shape[1]))
    for start in range(0, A.shape[0], step):
        block = A[start:start + step, None, :]
        if spec.kind == RBF:
            diff = block - B[None, :, :]
            out[start:start + step] = np.exp(-spec.gamma * np.sum(diff * diff, axis=-1))
        else:
            out[start:start + step] = _from_dot(spec, np.sum(block * B[None, :, :], axis=-1))
    return out


def kernel_matrix(spec: KernelSpec, X) -> np.ndarray:
    """Dense Gram matrix of ``X``; exactly symmetric by construction."""
    X = _as_matrix(X)
    if X.shape[0] == 0:
        raise InputError("kernel_matrix needs at least one feature vector")
    K = cross_kernel(spec, X, X)
    upper = np.triu(K)
    return upper + np.triu(K, 1).T
