"""One-level 2-D Haar transform with orthonormal normalization.

Each 1-D pass maps adjacent pairs (a, b) to ((a+b)/sqrt2, (a-b)/sqrt2); the
rows pass runs first, then the columns pass. The transform is orthonormal
(Parseval holds) and linear, so it commutes with pixelwise frame mixing,
which is what allows source separation to run in the coefficient domain.
Odd dimensions are rejected here; padding policy belongs to the pipeline.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mixcore import Frame, _freeze

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class SubbandImage:
    """The four quarter-resolution planes of a one-level decomposition.

    ll is the low-frequency approximation; lh carries horizontal detail
    (row-pass detail), hl vertical detail (column-pass detail), hh diagonal.
    """

    ll: np.ndarray
    lh: np.ndarray
    hl: np.ndarray
    hh: np.ndarray
    original_width: int
    original_height: int

    def __post_init__(self):
        planes = {}
        for name in ("ll", "lh", "hl", "hh"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            if arr.ndim != 2:
                raise ValueError(f"subband {name} must be 2-D")
            planes[name] = arr
        shape = planes["ll"].shape
        if any(p.shape != shape for p in planes.values()):
            raise ValueError("subband planes must share dimensions")
        if self.original_width != 2 * shape[1] or self.original_height != 2 * shape[0]:
            raise ValueError("subband dimensions must be half the original dimensions")
        for name, arr in planes.items():
            object.__setattr__(self, name, _freeze(arr))

    @property
    def coefficient_count(self) -> int:
        """Coefficients per subband plane (a quarter of the frame pixels)."""
        return self.ll.size


def haar_forward(frame: Frame) -> SubbandImage:
    """One-level orthonormal Haar decomposition of an even-dimension frame."""
    if frame.width % 2 or frame.height % 2:
        raise ValueError(
            f"frame dimensions must be even for the transform, got {frame.width}x{frame.height}"
        )
    a = frame.pixels
    row_lo = (a[:, 0::2] + a[:, 1::2]) / _SQRT2
    row_hi = (a[:, 0::2] - a[:, 1::2]) / _SQRT2
    return SubbandImage(
        ll=(row_lo[0::2, :] + row_lo[1::2, :]) / _SQRT2,
        lh=(row_hi[0::2, :] + row_hi[1::2, :]) / _SQRT2,
        hl=(row_lo[0::2, :] - row_lo[1::2, :]) / _SQRT2,
        hh=(row_hi[0::2, :] - row_hi[1::2, :]) / _SQRT2,
        original_width=frame.width,
        original_height=frame.height,
    )


def haar_inverse(sb: SubbandImage) -> Frame:
    """Exact inverse of :func:`haar_forward`."""
    row_lo = np.empty((sb.original_height, sb.original_width // 2))
    row_hi = np.empty_like(row_lo)
    row_lo[0::2, :] = (sb.ll + sb.hl) / _SQRT2
    row_lo[1::2, :] = (sb.ll - sb.hl) / _SQRT2
    row_hi[0::2, :] = (sb.lh + sb.hh) / _SQRT2
    row_hi[1::2, :] = (sb.lh - sb.hh) / _SQRT2
    pixels = np.empty((sb.original_height, sb.original_width))
    pixels[:, 0::2] = (row_lo + row_hi) / _SQRT2
    pixels[:, 1::2] = (row_lo - row_hi) / _SQRT2
    return Frame(pixels)
