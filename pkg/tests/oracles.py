"""Independent reference implementations used only by the tests.

Nothing here imports from lcsvm: these are the second route that the package
code is checked against.
"""

import math

import numpy as np


def naive_kernel(kind, x, y, gamma=1.0, degree=2, scale=1.0, coef0=1.0):
    dot = sum(a * b for a, b in zip(x, y))
    if kind == "linear":
        return dot
    if kind == "rbf":
        return math.exp(-gamma * sum((a - b) ** 2 for a, b in zip(x, y)))
    return (scale * dot + coef0) ** degree


def naive_gram(kind, X, **params):
    n = len(X)
    return np.array([[naive_kernel(kind, X[i], X[j], **params) for j in range(n)]
                     for i in range(n)])


def jacobi_eigenvalues(A, sweeps=100, tol=1e-14):
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations."""
    A = np.array(A, dtype=float)
    n = A.shape[0]
    for _ in range(sweeps):
        off = np.sqrt(np.sum(np.tril(A, -1) ** 2))
        if off <= tol * max(1.0, np.abs(A).max()):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if A[p, q] == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * A[p, q])
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                R = np.eye(n)
                R[p, p] = R[q, q] = c
                R[p, q] = s
                R[q, p] = -s
                A = R.T @ A @ R
    return np.sort(np.diag(A))


def _project(v, y, C):
    """Euclidean projection onto {0 <= a <= C, y'a = 0} via the multiplier breakpoints."""
    def h(lam):
        return np.sum(y * np.clip(v[None, :] - np.outer(lam, y), 0.0, C), axis=1)

    knots = np.unique(np.concatenate([v * y, (v - C) * y]))
    knots = np.concatenate([[knots[0] - 1.0], knots, [knots[-1] + 1.0]])
    vals = h(knots)
    # h is nonincreasing; locate the segment where it crosses zero.
    idx = np.nonzero(vals <= 0)[0][0]
    if vals[idx] == 0 or idx == 0:
        lam = knots[idx]
    else:
        l0, l1 = knots[idx - 1], knots[idx]
        h0, h1 = vals[idx - 1], vals[idx]
        lam = l0 + (l1 - l0) * h0 / (h0 - h1)
    return np.clip(v - lam * y, 0.0, C)


def projected_gradient_qp(K, y, C, max_iter=50000):
    """Solve the SVM dual by accelerated projected gradient with restarts.

    Returns (alphas, W(alphas)).  Stops when the objective improves by less
    than 1e-13 (relative) over a window of 500 iterations.
    """
    y = np.asarray(y, dtype=float)
    K = np.asarray(K, dtype=float)
    Q = K * np.outer(y, y)
    L = max(np.linalg.norm(Q, 2), 1e-12)
    a = np.zeros(y.size)
    z = a.copy()
    t = 1.0

    def f(v):
        return 0.5 * v @ Q @ v - v.sum()

    fa = f(a)
    checkpoint = fa
    for it in range(max_iter):
        a_new = _project(z - (Q @ z - 1.0) / L, y, C)
        f_new = f(a_new)
        if f_new > fa:
            # Momentum overshot: restart with a plain projected-gradient step.
            t = 1.0
            a_new = _project(a - (Q @ a - 1.0) / L, y, C)
            f_new = f(a_new)
            z = a_new.copy()
        else:
            t_new = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
            z = a_new + ((t - 1.0) / t_new) * (a_new - a)
            t = t_new
        if f_new <= fa:
            a, fa = a_new, f_new
        if it % 500 == 499:
            if checkpoint - fa <= 1e-13 * max(1.0, abs(fa)):
                break
            checkpoint = fa
    return a, -fa


def kappa_direct(counts):
    """Cohen's kappa as (p_o - p_e) / (1 - p_e) with proportions."""
    counts = [[float(c) for c in row] for row in counts]
    k = len(counts)
    total = sum(sum(row) for row in counts)
    p_o = sum(counts[i][i] for i in range(k)) / total
    rows = [sum(counts[i]) / total for i in range(k)]
    cols = [sum(counts[i][j] for i in range(k)) / total for j in range(k)]
    p_e = sum(r * c for r, c in zip(rows, cols))
    return (p_o - p_e) / (1.0 - p_e)
