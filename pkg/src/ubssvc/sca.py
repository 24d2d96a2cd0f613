"""Sparse-recovery decoder core.

When at most m-1 of the n sources are active at a sample, the observed
m-vector for that sample lies in the subspace spanned by the corresponding
m-1 columns of the mixing matrix. There are C(n, m-1) such subspaces and
the matrix is known, so recovery is: find the subspace nearest to each
observed column, solve for the coefficients on its spanning columns, and
place them at the matching source indices (zeros elsewhere).

Real coefficients are only approximately sparse, so classification works on
the relative residual against a tolerance ``tau``, and columns that miss
every subspace are still assigned to the nearest one, flagged ``forced``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .mixcore import DEFAULT_ZERO_EPS, MixingMatrix, _freeze

ZERO_PLANE = -1  # plane_index sentinel for near-zero columns


def _orthonormalize(columns: np.ndarray) -> np.ndarray:
    """Sequential orthogonalization with one re-orthogonalization pass."""
    q = np.array(columns, dtype=np.float64)
    for j in range(q.shape[1]):
        v = q[:, j]
        for _ in range(2):
            for i in range(j):
                v -= (q[:, i] @ v) * q[:, i]
        norm = np.linalg.norm(v)
        if norm <= 1e-12 * max(1.0, np.linalg.norm(columns[:, j])):
            raise ValueError("rank-deficient spanning set; mixing matrix is invalid")
        q[:, j] = v / norm
    return q


@dataclass(frozen=True, eq=False)
class Hyperplane:
    """A subspace of R^m spanned by m-1 columns of the mixing matrix."""

    index_set: tuple[int, ...]
    basis: np.ndarray
    orthonormal_basis: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "index_set", tuple(int(i) for i in self.index_set))
        object.__setattr__(self, "basis", _freeze(self.basis))
        object.__setattr__(self, "orthonormal_basis", _freeze(self.orthonormal_basis))


@dataclass(frozen=True, eq=False)
class HyperplaneSet:
    """All C(n, m-1) candidate subspaces, in lexicographic index order."""

    planes: tuple[Hyperplane, ...]

    @property
    def count(self) -> int:
        return len(self.planes)

    @property
    def dimension(self) -> int:
        """Ambient dimension m (length of observed columns)."""
        return self.planes[0].basis.shape[0]


def build_hyperplanes(matrix: MixingMatrix) -> HyperplaneSet:
    """Enumerate the subspaces spanned by every size-(m-1) column subset."""
    m, n = matrix.rows, matrix.cols
    planes = []
    for index_set in itertools.combinations(range(n), m - 1):
        basis = matrix.entries[:, index_set]
        planes.append(
            Hyperplane(
                index_set=index_set,
                basis=basis,
                orthonormal_basis=_orthonormalize(basis),
            )
        )
    return HyperplaneSet(planes=tuple(planes))


def column_residual(plane: Hyperplane, column) -> float:
    """Distance ||x - P x|| from a column to the plane's span."""
    x = np.asarray(column, dtype=np.float64).reshape(-1)
    q = plane.orthonormal_basis
    if x.shape[0] != q.shape[0]:
        raise ValueError(f"column has length {x.shape[0]}, expected {q.shape[0]}")
    return float(np.linalg.norm(x - q @ (q.T @ x)))


def _solve_coefficients(basis: np.ndarray, x: np.ndarray) -> np.ndarray:
    # Normal equations on at most m-1 columns; exact for in-plane columns,
    # best approximation within the plane for forced ones.
    return np.linalg.solve(basis.T @ basis, basis.T @ x)


@dataclass(frozen=True)
class ColumnAssignment:
    """Where one observed column landed.

    ``residual`` is the relative residual ||x - Px|| / ||x|| of the chosen
    plane; ``forced`` marks columns whose residual exceeded the tolerance
    and were assigned best-effort. The zero assignment (near-zero columns)
    has ``plane_index == ZERO_PLANE`` and empty coefficients.
    """

    plane_index: int
    index_set: tuple[int, ...]
    coefficients: tuple[float, ...]
    residual: float
    forced: bool

    @property
    def is_zero(self) -> bool:
        return self.plane_index == ZERO_PLANE


_ZERO_ASSIGNMENT = ColumnAssignment(ZERO_PLANE, (), (), 0.0, False)


def classify_column(
    planes: HyperplaneSet,
    column,
    tau: float,
    zero_eps: float = 0.0,
) -> ColumnAssignment:
    """Assign a column to its minimum-residual plane.

    Ties break toward the smallest plane index; reconstruction does not
    depend on the choice because tied planes contain the column jointly.
    """
    if tau < 0:
        raise ValueError("tau must be >= 0")
    x = np.asarray(column, dtype=np.float64).reshape(-1)
    norm = float(np.linalg.norm(x))
    if norm <= zero_eps or norm == 0.0:
        return _ZERO_ASSIGNMENT
    best_q = 0
    best_res = np.inf
    for q, plane in enumerate(planes.planes):
        res = column_residual(plane, x)
        if res < best_res:
            best_q, best_res = q, res
    plane = planes.planes[best_q]
    lam = _solve_coefficients(plane.basis, x)
    relative = best_res / norm
    return ColumnAssignment(
        plane_index=best_q,
        index_set=plane.index_set,
        coefficients=tuple(float(v) for v in lam),
        residual=relative,
        forced=bool(relative > tau),
    )


def reconstruct_column(assignment: ColumnAssignment, n: int) -> np.ndarray:
    """Scatter the plane coefficients into an n-vector, zeros elsewhere."""
    out = np.zeros(n)
    if assignment.is_zero:
        return out
    for idx, value in zip(assignment.index_set, assignment.coefficients, strict=True):
        if not 0 <= idx < n:
            raise ValueError(f"assignment index {idx} out of range for n = {n}")
        out[idx] = value
    return out


@dataclass(frozen=True, eq=False)
class RecoveryStats:
    """Column census of a recovery run.

    ``residuals`` holds the relative residual of every non-zero column in
    column order; quantiles are derived from it on demand so that stats
    from several runs can be pooled without losing information.
    """

    total_columns: int
    zero_columns: int
    clean_columns: int
    forced_columns: int
    residuals: np.ndarray

    def residual_quantiles(self, probs=(0.0, 0.25, 0.5, 0.75, 1.0)) -> tuple[float, ...]:
        if self.residuals.size == 0:
            return ()
        return tuple(float(v) for v in np.quantile(self.residuals, probs))

    @classmethod
    def merged(cls, parts) -> "RecoveryStats":
        parts = list(parts)
        if not parts:
            return cls(0, 0, 0, 0, np.empty(0))
        return cls(
            total_columns=sum(p.total_columns for p in parts),
            zero_columns=sum(p.zero_columns for p in parts),
            clean_columns=sum(p.clean_columns for p in parts),
            forced_columns=sum(p.forced_columns for p in parts),
            residuals=np.concatenate([p.residuals for p in parts]),
        )


def recover_block(matrix: MixingMatrix, mixed, tau: float) -> tuple[np.ndarray, RecoveryStats]:
    """Recover an (n, T) sparse source matrix from (m, T) observations.

    Columns are classified independently (vectorized over T); near-zero
    columns short-circuit to zero. Always returns an assignment for every
    column; tolerance misses only raise the ``forced`` count.
    """
    if tau < 0:
        raise ValueError("tau must be >= 0")
    x = np.asarray(mixed, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("mixed coefficients must be 2-D")
    m, t = x.shape
    if m != matrix.rows:
        raise ValueError(f"mixed matrix has {m} rows, matrix expects {matrix.rows}")
    planes = build_hyperplanes(matrix)
    recovered = np.zeros((matrix.cols, t))
    if t == 0:
        return recovered, RecoveryStats(0, 0, 0, 0, np.empty(0))

    norms = np.linalg.norm(x, axis=0)
    zero_eps = DEFAULT_ZERO_EPS * float(norms.max())
    active = norms > zero_eps
    zero_count = int(t - active.sum())
    if not active.any():
        return recovered, RecoveryStats(t, zero_count, 0, 0, np.empty(0))

    xa = x[:, active]
    residuals = np.empty((planes.count, xa.shape[1]))
    for q, plane in enumerate(planes.planes):
        qb = plane.orthonormal_basis
        residuals[q] = np.linalg.norm(xa - qb @ (qb.T @ xa), axis=0)
    best = np.argmin(residuals, axis=0)  # first minimum: smallest plane index wins ties
    relative = residuals[best, np.arange(xa.shape[1])] / norms[active]
    forced = relative > tau

    active_cols = np.flatnonzero(active)
    for q, plane in enumerate(planes.planes):
        sel = best == q
        if not sel.any():
            continue
        basis = plane.basis
        lam = np.linalg.solve(basis.T @ basis, basis.T @ xa[:, sel])
        recovered[np.asarray(plane.index_set)[:, None], active_cols[sel][None, :]] = lam

    stats = RecoveryStats(
        total_columns=t,
        zero_columns=zero_count,
        clean_columns=int((~forced).sum()),
        forced_columns=int(forced.sum()),
        residuals=relative,
    )
    return recovered, stats


def recover_dense(pseudo_inverse, mixed) -> np.ndarray:
    """Minimum-norm dense recovery y = A+ x, used for the non-sparse band."""
    pinv = np.asarray(pseudo_inverse, dtype=np.float64)
    x = np.asarray(mixed, dtype=np.float64)
    if pinv.ndim != 2 or x.ndim != 2 or pinv.shape[1] != x.shape[0]:
        raise ValueError(
            f"shape mismatch: pseudo-inverse {pinv.shape} against observations {x.shape}"
        )
    return pinv @ x
