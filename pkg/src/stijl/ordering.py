"""Spectral row/column ordering for unordered data.

Power iteration on the raw 0/1 matrix finds the dominant singular pair;
rows are sorted by their component of the left vector, columns by the
right vector. The miner itself assumes ordered data, so this runs (when
asked) strictly before mining.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError
from .matrix import BinaryMatrix

CONVERGENCE_TOL = 1e-9
MAX_ITERATIONS = 1000


@dataclass(frozen=True)
class OrderingResult:
    """Permutations (old index -> new position) plus their sort scores."""

    row_perm: np.ndarray
    col_perm: np.ndarray
    row_scores: np.ndarray
    col_scores: np.ndarray
    converged: bool
    warning: str | None = None


def spectral_order(
    matrix: BinaryMatrix,
    *,
    tol: float = CONVERGENCE_TOL,
    max_iter: int = MAX_ITERATIONS,
) -> OrderingResult:
    """Permutations sorting rows/columns by the dominant singular vectors.

    Alternating power iteration (v from the columns, u from the rows) with
    a deterministic start: the all-ones vector perturbed by 1e-6 times the
    0-based index. The pair's sign is fixed so the largest-magnitude
    component of u is positive; ties in the sort keep original order. An
    all-zero matrix gets identity permutations and a warning instead of a
    spectral order.
    """
    n, m = matrix.n_rows, matrix.n_cols
    if matrix.total_ones == 0:
        return OrderingResult(
            row_perm=np.arange(n),
            col_perm=np.arange(m),
            row_scores=np.zeros(n),
            col_scores=np.zeros(m),
            converged=True,
            warning="all-zero matrix has no spectral order; using identity",
        )
    data = matrix.values.astype(np.float64)
    u = 1.0 + 1e-6 * np.arange(n)
    u /= np.linalg.norm(u)
    v = np.zeros(m)
    converged = False
    for _ in range(max_iter):
        v_new = data.T @ u
        v_new /= np.linalg.norm(v_new)
        u_new = data @ v_new
        u_new /= np.linalg.norm(u_new)
        if (
            np.abs(u_new - u).max() < tol
            and np.abs(v_new - v).max() < tol
        ):
            u, v = u_new, v_new
            converged = True
            break
        u, v = u_new, v_new
    if u[np.abs(u).argmax()] < 0:
        u = -u
        v = -v
    row_order = np.argsort(u, kind="stable")
    col_order = np.argsort(v, kind="stable")
    row_perm = np.empty(n, dtype=np.int64)
    col_perm = np.empty(m, dtype=np.int64)
    row_perm[row_order] = np.arange(n)
    col_perm[col_order] = np.arange(m)
    warning = None if converged else f"power iteration hit the {max_iter}-iteration cap"
    return OrderingResult(row_perm, col_perm, u, v, converged, warning)


def apply_permutation(matrix: BinaryMatrix, ordering: OrderingResult) -> BinaryMatrix:
    """Rebuild the matrix with cell (i, j) moved to
    (row_perm[i], col_perm[j])."""
    n, m = matrix.n_rows, matrix.n_cols
    if ordering.row_perm.shape[0] != n or ordering.col_perm.shape[0] != m:
        raise DimensionMismatchError(
            f"permutations for {ordering.row_perm.shape[0]}x"
            f"{ordering.col_perm.shape[0]} cannot reorder a {n}x{m} matrix"
        )
    for perm, size, axis in ((ordering.row_perm, n, "row"), (ordering.col_perm, m, "column")):
        if sorted(perm.tolist()) != list(range(size)):
            raise ValueError(f"{axis} permutation is not a bijection on 0..{size - 1}")
    values = np.empty_like(matrix.values)
    values[ordering.row_perm[:, None], ordering.col_perm[None, :]] = matrix.values
    return BinaryMatrix(values)
