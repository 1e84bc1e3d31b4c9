"""File formats: TOM1 raw grids, PNG export, dataset ingestion.

A TOM1 file is a 16-byte header -- magic ``b"TOM1"``, then rows, cols
and a dtype tag as little-endian uint32 -- followed by the grid as
little-endian float32, row-major. Tag 0 is float32 (the only tag
currently written or accepted).
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np
from PIL import Image as PILImage

MAGIC = b"TOM1"
DTYPE_FLOAT32 = 0
_HEADER = struct.Struct("<4sIII")


def save_grid(path, grid: np.ndarray) -> None:
    """Write a 2D array as a TOM1 float32 raw grid."""
    arr = np.asarray(grid)
    if arr.ndim != 2:
        raise ValueError(f"TOM1 stores 2D grids, got shape {arr.shape}")
    data = np.ascontiguousarray(arr, dtype="<f4")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, arr.shape[0], arr.shape[1], DTYPE_FLOAT32))
        fh.write(data.tobytes())


def load_grid(path) -> np.ndarray:
    """Read a TOM1 raw grid as a float32 array; losslessly round-trips."""
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise ValueError(f"{path}: truncated TOM1 header")
        magic, rows, cols, tag = _HEADER.unpack(header)
        if magic != MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
        if tag != DTYPE_FLOAT32:
            raise ValueError(f"{path}: unsupported dtype tag {tag}")
        payload = fh.read(rows * cols * 4)
    if len(payload) != rows * cols * 4:
        raise ValueError(f"{path}: truncated TOM1 payload")
    return np.frombuffer(payload, dtype="<f4").reshape(rows, cols).copy()


def save_png(path, image: np.ndarray) -> None:
    """Export an image as 8-bit PNG, min-max windowed (visualization only)."""
    arr = np.asarray(image, dtype=np.float64)
    lo, hi = arr.min(), arr.max()
    if hi > lo:
        arr = (arr - lo) / (hi - lo)
    else:
        arr = np.zeros_like(arr)
    PILImage.fromarray((arr * 255.0).round().astype(np.uint8)).save(path)


def ingest_dataset(directory, expected_size: int | None = None) -> list[np.ndarray]:
    """Load all TOM1 grids in a directory as a normalized image set.

    Files are read in filename order; all must share one shape (and
    match ``expected_size`` when given). The set is min-max normalized
    to [0, 1] with a single global window.
    """
    directory = Path(directory)
    paths = sorted(p for p in directory.iterdir() if p.is_file())
    if not paths:
        raise ValueError(f"{directory}: no files to ingest")
    images = []
    shape = None
    for path in paths:
        try:
            grid = load_grid(path)
        except ValueError as exc:
            raise ValueError(f"cannot ingest {path.name}: {exc}") from exc
        if expected_size is not None and grid.shape != (expected_size, expected_size):
            raise ValueError(
                f"{path.name}: expected {expected_size}x{expected_size}, "
                f"got {grid.shape[0]}x{grid.shape[1]}")
        if shape is None:
            shape = grid.shape
        elif grid.shape != shape:
            raise ValueError(
                f"{path.name}: shape {grid.shape} differs from first file's {shape}")
        images.append(grid.astype(np.float64))
    stack = np.stack(images)
    lo, hi = stack.min(), stack.max()
    if hi <= lo:
        raise ValueError(f"{directory}: dataset is constant, cannot normalize")
    return [(img - lo) / (hi - lo) for img in images]
