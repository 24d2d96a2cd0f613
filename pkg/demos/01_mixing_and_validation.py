"""Mixing basics: the matrix, its validation, and the generalized inverse.

Four consecutive frames are treated as one source block and mixed down to
three frames by a fixed 3x4 matrix. The matrix is usable only if every one
of its 3x3 submatrices is far from singular; this script prints the
determinant evidence and shows what mixing does to simple inputs.
"""
import numpy as np

from ubssvc import (
    Frame,
    FrameBlock,
    check_sparsity,
    default_mixing_matrix,
    generalized_inverse,
    mix_block,
    validate_mixing_matrix,
)

matrix = default_mixing_matrix()
print("mixing matrix (3 mixed frames from 4 sources):")
print(matrix.entries)

print("\nsubmatrix nonsingularity check:")
report = validate_mixing_matrix(matrix)
for cols, magnitude in report.submatrix_results:
    print(f"  columns {cols}: |det| = {magnitude:.6f}")
print(f"  -> {'PASS' if report.passed else 'FAIL'} (min {report.min_abs_determinant:.6f})")

# Constant frames make the row sums visible: each mixed frame is just
# (sum of row weights) * 100.
block = FrameBlock(tuple(Frame(np.full((4, 4), 100.0)) for _ in range(4)))
mixed = mix_block(matrix, block)
print("\nfour constant-100 frames mix to constants:")
print("  ", [float(f.pixels[0, 0]) for f in mixed.frames])
print("  (row sums are", matrix.entries.sum(axis=1), "- mixed values exceed 255)")

# The generalized inverse undoes mixing only up to a projection: A+ A is a
# rank-3 projector on the 4-dimensional source space.
pinv = generalized_inverse(matrix)
print("\ngeneralized inverse A+ (4x3):")
print(pinv)
print("A @ A+ = I to", np.abs(matrix.entries @ pinv - np.eye(3)).max())
projector = pinv @ matrix.entries
print("A+ @ A applied to (1,1,1,1):", projector @ np.ones(4))
print("  -> constant sources are NOT recovered exactly; that is the price of mixing")

# Sparsity is what makes exact recovery possible for the detail bands.
rng = np.random.default_rng(0)
sparse = np.zeros((4, 8))
sparse[rng.integers(0, 4, 8), np.arange(8)] = rng.uniform(-50, 50, 8)
print("\nsparsity census of a 1-active-per-column matrix (bound m-1 = 2):")
print(" ", check_sparsity(sparse, m=3))
