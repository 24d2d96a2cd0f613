"""Deterministic synthetic test sequences.

All randomness comes from integer draws on a seeded generator and maps to
pixel values through fixed arithmetic, so a given (preset, seed, size)
produces identical frames on every platform and run.
"""
from __future__ import annotations

import math

import numpy as np

from .mixcore import Frame

PRESETS = ("sparse-detail", "noise")

_BASE_TILE = 16
_BASE_LO, _BASE_HI = 40, 200  # + detail range stays inside [0, 255]
_DETAIL_AMP = 40


def sparse_detail(count, width, height, seed, group=4, max_active=2) -> list[Frame]:
    """Piecewise-constant frames with sparse per-group detail.

    Frames come in groups of ``group``; each group shares one
    piecewise-constant base plane (constant on aligned 16x16 tiles, hence
    on every 2x2 cell). Per 2x2 cell, at most ``max_active`` frames of the
    group receive an additive intra-cell pattern, so after a one-level
    transform every detail-coefficient column has at most ``max_active``
    active sources. Defaults match the built-in 4-into-3 codec.
    """
    if count < 1 or width < 1 or height < 1:
        raise ValueError("count, width, height must be positive")
    if not 1 <= max_active < group:
        raise ValueError("need 1 <= max_active < group")
    rng = np.random.default_rng(seed)
    cells_h = math.ceil(height / 2)
    cells_w = math.ceil(width / 2)
    tiles_h = math.ceil(height / _BASE_TILE)
    tiles_w = math.ceil(width / _BASE_TILE)

    frames: list[Frame] = []
    for _ in range(math.ceil(count / group)):
        tiles = rng.integers(_BASE_LO, _BASE_HI, size=(tiles_h, tiles_w))
        base = np.repeat(np.repeat(tiles, _BASE_TILE, 0), _BASE_TILE, 1)[:height, :width]
        active = rng.integers(0, max_active + 1, size=(cells_h, cells_w))
        first = rng.integers(0, group, size=(cells_h, cells_w))
        second = (first + rng.integers(1, group, size=(cells_h, cells_w))) % group
        detail = rng.integers(-_DETAIL_AMP, _DETAIL_AMP + 1, size=(group, height, width))
        for j in range(group):
            cell_mask = ((active >= 1) & (first == j)) | ((active >= 2) & (second == j))
            mask = np.repeat(np.repeat(cell_mask, 2, 0), 2, 1)[:height, :width]
            plane = base + detail[j] * mask
            frames.append(Frame(np.clip(plane, 0, 255).astype(np.float64)))
    return frames[:count]


def noise(count, width, height, seed) -> list[Frame]:
    """Independent uniform 8-bit noise; a worst case for sparse recovery."""
    if count < 1 or width < 1 or height < 1:
        raise ValueError("count, width, height must be positive")
    rng = np.random.default_rng(seed)
    return [
        Frame(rng.integers(0, 256, size=(height, width)).astype(np.float64))
        for _ in range(count)
    ]


def generate(preset, count, width, height, seed) -> list[Frame]:
    if preset == "sparse-detail":
        return sparse_detail(count, width, height, seed)
    if preset == "noise":
        return noise(count, width, height, seed)
    raise ValueError(f"unknown preset {preset!r}; choose from {PRESETS}")
