"""Core data model: frames, frame blocks, and the mixing matrix.

Pixels are double-precision floats throughout internal processing; 8-bit
integers appear only at the I/O boundary. Mixed frames routinely exceed the
[0, 255] source range (the reference matrix has row sums up to 1.75), so
nothing in here clamps.

A mixing matrix must be underdetermined (fewer rows than columns) and every
square submatrix of it must be nonsingular. That second condition is what
guarantees that any subset of its columns spans a full-rank subspace, which
the recovery stage in :mod:`ubssvc.sca` depends on, so it is enforced at
construction time and separately inspectable via
:func:`validate_mixing_matrix`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

DEFAULT_DET_FLOOR = 1e-9
DEFAULT_ZERO_EPS = 1e-12

# Reference 3x4 mixing matrix used as the default codec configuration.
# Row weights are deliberately spread out so each mixed frame blends the
# four sources differently.
DEFAULT_MATRIX_ENTRIES = (
    (0.50, 0.75, 0.25, 0.15),
    (0.40, 0.25, 0.10, 1.00),
    (0.45, 0.10, 0.85, 0.25),
)


def _freeze(values, dtype=np.float64) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


def snap_to_8bit(values) -> np.ndarray:
    """Clamp to [0, 255] and round half away from zero.

    Returns float64 values that are exactly representable as uint8. This is
    the single definition of the 8-bit display domain used by metrics,
    serialization, and tail-frame passthrough.
    """
    arr = np.asarray(values, dtype=np.float64)
    return np.floor(np.clip(arr, 0.0, 255.0) + 0.5)


@dataclass(frozen=True, eq=False)
class Frame:
    """A single grayscale frame, stored as a (height, width) float64 plane."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("frame pixels must be a 2-D plane with positive dimensions")
        if not np.all(np.isfinite(arr)):
            raise ValueError("frame pixels must be finite")
        object.__setattr__(self, "pixels", _freeze(arr))

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def pixel_count(self) -> int:
        return self.pixels.size

    def as_vector(self) -> np.ndarray:
        """Row-major flattening of the plane (length width*height)."""
        return self.pixels.ravel()


def _uniform_frames(frames, minimum: int, kind: str) -> tuple[Frame, ...]:
    frames = tuple(frames)
    if len(frames) < minimum:
        raise ValueError(f"{kind} needs at least {minimum} frames, got {len(frames)}")
    w, h = frames[0].width, frames[0].height
    for f in frames[1:]:
        if f.width != w or f.height != h:
            raise ValueError(f"{kind} frames must share dimensions")
    return frames


@dataclass(frozen=True, eq=False)
class FrameBlock:
    """An ordered group of n >= 2 source frames with identical dimensions."""

    frames: tuple[Frame, ...]

    def __post_init__(self):
        object.__setattr__(self, "frames", _uniform_frames(self.frames, 2, "source block"))

    @property
    def count(self) -> int:
        return len(self.frames)

    @property
    def width(self) -> int:
        return self.frames[0].width

    @property
    def height(self) -> int:
        return self.frames[0].height

    def as_matrix(self) -> np.ndarray:
        """Stack frames into an (n, T) matrix, one row per frame."""
        return np.stack([f.as_vector() for f in self.frames])


@dataclass(frozen=True, eq=False)
class MixedBlock:
    """An ordered group of m >= 2 mixed frames with identical dimensions."""

    frames: tuple[Frame, ...]

    def __post_init__(self):
        object.__setattr__(self, "frames", _uniform_frames(self.frames, 2, "mixed block"))

    @property
    def count(self) -> int:
        return len(self.frames)

    @property
    def width(self) -> int:
        return self.frames[0].width

    @property
    def height(self) -> int:
        return self.frames[0].height

    def as_matrix(self) -> np.ndarray:
        return np.stack([f.as_vector() for f in self.frames])


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the square-submatrix nonsingularity check.

    ``submatrix_results`` lists every size-m column subset (0-based indices,
    lexicographic order) with the magnitude of its determinant.
    """

    passed: bool
    submatrix_results: tuple[tuple[tuple[int, ...], float], ...]
    min_abs_determinant: float


def validate_mixing_matrix(matrix, det_floor: float = DEFAULT_DET_FLOOR) -> ValidationReport:
    """Check that every m x m submatrix of an m x n matrix is nonsingular.

    Accepts a :class:`MixingMatrix` or a raw 2-D array-like, so candidate
    matrices can be screened before construction. Nonsingularity is tested
    as |det| > det_floor for each of the C(n, m) column subsets.
    """
    if det_floor <= 0:
        raise ValueError("det_floor must be positive")
    entries = matrix.entries if isinstance(matrix, MixingMatrix) else np.asarray(matrix, dtype=np.float64)
    if entries.ndim != 2:
        raise ValueError("mixing matrix must be 2-D")
    m, n = entries.shape
    if m >= n:
        raise ValueError(f"matrix must be underdetermined: rows ({m}) must be < columns ({n})")
    if not np.all(np.isfinite(entries)):
        raise ValueError("mixing matrix entries must be finite")
    results = []
    for cols in itertools.combinations(range(n), m):
        magnitude = float(abs(np.linalg.det(entries[:, cols])))
        results.append((cols, magnitude))
    min_mag = min(mag for _, mag in results)
    return ValidationReport(
        passed=bool(min_mag > det_floor),
        submatrix_results=tuple(results),
        min_abs_determinant=min_mag,
    )


@dataclass(frozen=True, eq=False)
class MixingMatrix:
    """The m x n mixing matrix, validated at construction.

    Construction fails unless m < n, all entries are finite, and every
    m x m submatrix has |det| above ``det_floor``.
    """

    entries: np.ndarray
    det_floor: float = DEFAULT_DET_FLOOR

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.float64)
        report = validate_mixing_matrix(arr, self.det_floor)
        if arr.shape[0] < 2:
            raise ValueError("mixing matrix needs at least 2 rows")
        if not report.passed:
            worst = min(report.submatrix_results, key=lambda item: item[1])
            raise ValueError(
                f"mixing matrix has a near-singular square submatrix: columns {worst[0]} "
                f"give |det| = {worst[1]:.3e} (floor {self.det_floor:g})"
            )
        object.__setattr__(self, "entries", _freeze(arr))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def column(self, j: int) -> np.ndarray:
        return self.entries[:, j]


def default_mixing_matrix() -> MixingMatrix:
    """The built-in 3x4 reference matrix (mixes 4 source frames into 3)."""
    return MixingMatrix(DEFAULT_MATRIX_ENTRIES)


def mix_block(matrix: MixingMatrix, block: FrameBlock) -> MixedBlock:
    """Mix n source frames into m frames: pixelwise x = A s.

    Pure function of its inputs; output frames keep the source dimensions.
    """
    if block.count != matrix.cols:
        raise ValueError(
            f"block has {block.count} frames but matrix mixes {matrix.cols}"
        )
    mixed = matrix.entries @ block.as_matrix()
    h, w = block.height, block.width
    return MixedBlock(tuple(Frame(row.reshape(h, w)) for row in mixed))


def generalized_inverse(matrix: MixingMatrix, cond_bound: float = 1e12) -> np.ndarray:
    """Minimum-norm right inverse A+ = A^T (A A^T)^-1, as an (n, m) array.

    Computed by normal equations on the m x m Gram matrix; m is tiny here
    and the construction-time validation keeps the conditioning benign.
    Satisfies A @ A+ = I to machine precision.
    """
    gram = matrix.entries @ matrix.entries.T
    if np.linalg.cond(gram) > cond_bound:
        raise ValueError("mixing matrix rows are numerically dependent")
    return np.linalg.solve(gram, matrix.entries).T


@dataclass(frozen=True)
class SparsityReport:
    """Per-column nonzero census of a source matrix against the m-1 bound.

    ``histogram[k]`` counts columns with exactly k nonzeros.
    """

    satisfied: bool
    max_nonzeros: int
    fraction_ok: float
    histogram: tuple[int, ...]
    column_count: int


def check_sparsity(source, m: int, zero_eps: float = DEFAULT_ZERO_EPS) -> SparsityReport:
    """Count nonzeros per column; satisfied iff every column has <= m-1.

    ``source`` is a FrameBlock or an (n, T) array. Diagnostic only: real
    video only approximates the bound and the recovery stage tolerates
    violations, this just quantifies them.
    """
    mat = source.as_matrix() if isinstance(source, FrameBlock) else np.asarray(source, dtype=np.float64)
    if mat.ndim != 2:
        raise ValueError("source must be 2-D")
    n, t = mat.shape
    if not 1 <= m <= n:
        raise ValueError(f"m = {m} must be in 1..{n}")
    counts = np.count_nonzero(np.abs(mat) > zero_eps, axis=0)
    hist = np.bincount(counts, minlength=n + 1) if t else np.zeros(n + 1, dtype=int)
    ok = counts <= m - 1
    return SparsityReport(
        satisfied=bool(ok.all()) if t else True,
        max_nonzeros=int(counts.max()) if t else 0,
        fraction_ok=float(ok.mean()) if t else 1.0,
        histogram=tuple(int(c) for c in hist),
        column_count=t,
    )
