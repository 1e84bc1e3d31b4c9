"""Input validation helpers shared across the package."""

from __future__ import annotations

import numpy as np

from .geometry import Geometry


def check_image(image, geom: Geometry | None = None) -> np.ndarray:
    """Validate a 2D image array and return it as float64.

    Raises ``ValueError`` on wrong rank, non-finite entries, or (when
    ``geom`` is given) a shape mismatch.
    """
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"image must be 2D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("image contains NaN or Inf entries")
    if geom is not None and arr.shape != geom.image_shape:
        raise ValueError(
            f"image shape {arr.shape} does not match geometry {geom.image_shape}")
    return arr


def check_angle_ids(angle_ids, n_angles_full: int) -> np.ndarray:
    """Validate angle indices: nonempty, unique, within range; returns sorted."""
    ids = np.asarray(angle_ids, dtype=np.intp).ravel()
    if ids.size == 0:
        raise ValueError("angle_ids must be nonempty")
    if ids.min() < 0 or ids.max() >= n_angles_full:
        raise ValueError(
            f"angle_ids must lie in [0, {n_angles_full}), got "
            f"[{ids.min()}, {ids.max()}]")
    ids = np.sort(ids)
    if np.any(np.diff(ids) == 0):
        raise ValueError("angle_ids contains duplicates")
    return ids


def check_same_shape(a: np.ndarray, b: np.ndarray, what: str = "images") -> None:
    if a.shape != b.shape:
        raise ValueError(f"{what} must share a shape, got {a.shape} vs {b.shape}")
