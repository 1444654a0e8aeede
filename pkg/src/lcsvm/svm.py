"""Binary soft-margin C-SVM trained by sequential minimal optimization.

The solver works on the dual

    maximize   W(a) = sum(a) - 1/2 sum_ij a_i a_j y_i y_j K(x_i, x_j)
    subject to 0 <= a_i <= C,  sum_i a_i y_i = 0

picking at each step the maximal violating pair and updating the two
multipliers analytically.  No shrinking and no kernel cache: the Gram matrix
is built once per problem.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DimensionError, InputError, UnsolvableProblemError
from .kernels import KernelSpec, cross_kernel, kernel_matrix

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverSettings:
    kkt_tolerance: float = 1e-3
    min_alpha_step: float = 1e-12
    max_passes: int | None = None  # None -> max(1000, 10 * n); one pass = n pair updates

    def __post_init__(self):
        if not self.kkt_tolerance > 0:
            raise InputError("kkt_tolerance must be positive")
        if not self.min_alpha_step > 0:
            raise InputError("min_alpha_step must be positive")
        if self.max_passes is not None and self.max_passes < 1:
            raise InputError("max_passes must be a positive integer")

    def iteration_cap(self, n: int) -> int:
        passes = self.max_passes if self.max_passes is not None else max(1000, 10 * n)
        return int(passes) * n


@dataclass
class BinaryProblem:
    features: np.ndarray
    labels: np.ndarray
    C: float
    kernel: KernelSpec

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        if self.features.ndim == 1:
            self.features = self.features.reshape(-1, 1)
        self.labels = np.asarray(self.labels, dtype=np.float64).reshape(-1)
        if self.features.shape[0] != self.labels.size:
            raise DimensionError(
                f"{self.features.shape[0]} feature vectors but {self.labels.size} labels")
        if self.labels.size == 0:
            raise InputError("binary problem has no samples")
        if not np.all(np.isin(self.labels, (-1.0, 1.0))):
            raise InputError("binary labels must be -1 or +1")
        if not np.all(np.isfinite(self.features)):
            raise InputError("binary problem contains non-finite features")
        if not (np.isfinite(self.C) and self.C > 0):
            raise InputError(f"C must be positive and finite, got {self.C}")

    @property
    def n(self) -> int:
        return self.labels.size


@dataclass(frozen=True)
class BinaryModel:
    """Trained two-class SVM; ``coefficients`` hold alpha_i * y_i."""

    support_vectors: np.ndarray
    coefficients: np.ndarray
    bias: float
    kernel: KernelSpec

    @property
    def dimension(self) -> int:
        return self.support_vectors.shape[1]


@dataclass
class SolveResult:
    """Raw solver output, kept for diagnostics and tests."""

    alphas: np.ndarray
    bias: float
    iterations: int
    violation: float
    objective_trace: list = field(default_factory=list)


def _bias_from_alphas(alphas, y, g, C):
    """Bias from free multipliers, or the midpoint of the KKT bounds if none are free."""
    r = y - g
    free = (alphas > 0) & (alphas < C)
    if np.any(free):
        return float(np.mean(r[free]))
    at_zero = alphas <= 0
    at_c = ~at_zero
    lower = (at_zero & (y > 0)) | (at_c & (y < 0))
    upper = (at_zero & (y < 0)) | (at_c & (y > 0))
    lo = np.max(r[lower]) if np.any(lower) else None
    hi = np.min(r[upper]) if np.any(upper) else None
    if lo is None:
        return float(hi)
    if hi is None:
        return float(lo)
    return float(0.5 * (lo + hi))


def _violating_pair(alphas, y, grad, C):
    """Indices (i, j) of the maximal violating pair and the gap m - M."""
    score = -y * grad
    up = ((y > 0) & (alphas < C)) | ((y < 0) & (alphas > 0))
    low = ((y < 0) & (alphas < C)) | ((y > 0) & (alphas > 0))
    if not np.any(up) or not np.any(low):
        return -1, -1, 0.0
    masked_up = np.where(up, score, -np.inf)
    masked_low = np.where(low, score, np.inf)
    i = int(np.argmax(masked_up))
    j = int(np.argmin(masked_low))
    return i, j, float(masked_up[i] - masked_low[j])


def solve_dual(problem: BinaryProblem, settings: SolverSettings | None = None,
               record_objective: bool = False) -> SolveResult:
    """Run SMO on ``problem`` and return multipliers, bias and diagnostics.

    Raises
    ------
    UnsolvableProblemError
        If only one label is present.
    ConvergenceError
        If the iteration cap is reached with the KKT gap above tolerance.
    """
    settings = settings or SolverSettings()
    y = problem.labels
    if np.all(y > 0) or np.all(y < 0):
        raise UnsolvableProblemError("binary problem needs both +1 and -1 labels")
    C = float(problem.C)
    n = problem.n
    K = kernel_matrix(problem.kernel, problem.features)
    Q = K * np.outer(y, y)
    diag = np.diag(Q).copy()

    alphas = np.zeros(n)
    grad = -np.ones(n)  # gradient of f(a) = 1/2 a'Qa - sum(a), i.e. of -W
    trace = [0.0] if record_objective else []
    cap = settings.iteration_cap(n)
    tol = settings.kkt_tolerance
    gap = np.inf
    it = 0
    while True:
        i, j, gap = _violating_pair(alphas, y, grad, C)
        if i < 0 or gap <= tol:
            break
        if it >= cap:
            raise ConvergenceError(
                f"SMO stopped after {it} iterations with KKT gap {gap:.3g} > {tol:g}",
                violation=gap)
        it += 1

        # Step t moves a_i by +y_i t and a_j by -y_j t, keeping sum(a y) fixed.
        curvature = diag[i] + diag[j] - 2.0 * y[i] * y[j] * Q[i, j]
        if curvature <= 0:
            curvature = 1e-12
        t = gap / curvature
        # Feasible range of t from the box on both multipliers.
        t_max = (C - alphas[i]) if y[i] > 0 else alphas[i]
        t_max = min(t_max, alphas[j] if y[j] > 0 else C - alphas[j])
        if t < t_max and t < settings.min_alpha_step:
            log.debug("SMO stalled at iteration %d (step %.3g)", it, t)
            break
        t = min(t, t_max)

        new_i = alphas[i] + y[i] * t
        new_j = alphas[j] - y[j] * t
        # Snap to the bound that limited the step so clipping is exact.
        if t == t_max:
            new_i = min(max(new_i, 0.0), C)
            new_j = min(max(new_j, 0.0), C)
            if abs(new_i - C) <= 1e-12 * C:
                new_i = C
            elif abs(new_i) <= 1e-12 * C:
                new_i = 0.0
            if abs(new_j - C) <= 1e-12 * C:
                new_j = C
            elif abs(new_j) <= 1e-12 * C:
                new_j = 0.0
        d_i = new_i - alphas[i]
        d_j = new_j - alphas[j]
        alphas[i] = new_i
        alphas[j] = new_j
        grad += Q[:, i] * d_i + Q[:, j] * d_j
        if record_objective:
            trace.append(float(-0.5 * alphas @ (grad - 1.0)))

    if gap > tol and i >= 0:
        raise ConvergenceError(
            f"SMO stalled with KKT gap {gap:.3g} > {tol:g}", violation=gap)
    g = K @ (alphas * y)
    bias = _bias_from_alphas(alphas, y, g, C)
    return SolveResult(alphas=alphas, bias=bias, iterations=it,
                       violation=max(gap, 0.0) if np.isfinite(gap) else 0.0,
                       objective_trace=trace)


def model_from_alphas(problem: BinaryProblem, alphas, bias: float) -> BinaryModel:
    alphas = np.asarray(alphas, dtype=np.float64)
    keep = alphas != 0
    return BinaryModel(
        support_vectors=problem.features[keep].copy(),
        coefficients=(alphas * problem.labels)[keep],
        bias=float(bias),
        kernel=problem.kernel,
    )


def train_binary(problem: BinaryProblem, settings: SolverSettings | None = None) -> BinaryModel:
    """Train a binary C-SVM and return the support-vector model."""
    result = solve_dual(problem, settings)
    log.debug("trained %s with C=%g: %d iterations, %d SVs",
              problem.kernel.describe(), problem.C, result.iterations,
              int(np.count_nonzero(result.alphas)))
    return model_from_alphas(problem, result.alphas, result.bias)


def decision_values(model: BinaryModel, X) -> np.ndarray:
    """Vectorized decision function ``f(x) = sum_i coef_i K(sv_i, x) + b``."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.shape[1] != model.dimension:
        raise DimensionError(
            f"query has {X.shape[1]} features, model expects {model.dimension}")
    if model.coefficients.size == 0:
        return np.full(X.shape[0], model.bias)
    K = cross_kernel(model.kernel, X, model.support_vectors)
    return np.sum(K * model.coefficients, axis=1) + model.bias


def decision_value(model: BinaryModel, x) -> float:
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.size != model.dimension:
        raise DimensionError(f"query has {x.size} features, model expects {model.dimension}")
    return float(decision_values(model, x.reshape(1, -1))[0])


def predict_binary(model: BinaryModel, x) -> int:
    """Sign of the decision value; an exact zero predicts +1."""
    return 1 if decision_value(model, x) >= 0 else -1


def dual_objective(problem: BinaryProblem, alphas) -> float:
    """W(a) for a box-feasible multiplier vector."""
    alphas = np.asarray(alphas, dtype=np.float64).reshape(-1)
    if alphas.size != problem.n:
        raise DimensionError(f"expected {problem.n} multipliers, got {alphas.size}")
    if np.any(alphas < 0) or np.any(alphas > problem.C):
        raise InputError("multipliers violate the box 0 <= a <= C")
    K = kernel_matrix(problem.kernel, problem.features)
    v = alphas * problem.labels
    return float(np.sum(alphas) - 0.5 * v @ K @ v)


def max_kkt_violation(problem: BinaryProblem, alphas, bias: float) -> float:
    """Largest violation of the KKT conditions at (alphas, bias).

    Per point, with ``m_i = y_i f(x_i)``: ``a_i = 0`` needs ``m_i >= 1``,
    ``0 < a_i < C`` needs ``m_i = 1`` and ``a_i = C`` needs ``m_i <= 1``.
    The equality-constraint residual ``|sum a_i y_i|`` is included as well.
    """
    alphas = np.asarray(alphas, dtype=np.float64).reshape(-1)
    if alphas.size != problem.n:
        raise DimensionError(f"expected {problem.n} multipliers, got {alphas.size}")
    C = problem.C
    if np.any(alphas < 0) or np.any(alphas > C):
        raise InputError("multipliers violate the box 0 <= a <= C")
    y = problem.labels
    K = kernel_matrix(problem.kernel, problem.features)
    margin = y * (K @ (alphas * y) + bias)
    at_zero = alphas == 0
    at_c = alphas == C
    free = ~(at_zero | at_c)
    viol = np.zeros_like(margin)
    viol[at_zero] = np.maximum(0.0, 1.0 - margin[at_zero])
    viol[at_c] = np.maximum(0.0, margin[at_c] - 1.0)
    viol[free] = np.abs(1.0 - margin[free])
    return float(max(viol.max(), abs(float(alphas @ y))))
