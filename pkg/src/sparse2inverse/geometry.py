"""Parallel-beam 2D acquisition geometry.

Conventions used throughout the package:

* Images are ``(H, W)`` float arrays. Pixel ``(r, c)`` sits at physical
  coordinates ``x = (c - (W-1)/2) * pixel_spacing``,
  ``y = ((H-1)/2 - r) * pixel_spacing`` (y points up, origin at the
  image centre).
* Projection angles live on the semicircle ``[0, pi)``; the full set is
  the uniform grid ``theta_j = j * pi / n_angles_full``.
* Detector bin ``j`` of a projection at angle ``theta`` measures the line
  integral over ``{(x, y) : x cos(theta) + y sin(theta) = s_j}`` with
  ``s_j = (j - (n_detectors-1)/2) * detector_spacing``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def default_detector_count(height: int, width: int) -> int:
    """Smallest odd detector count covering sqrt(2) * max(height, width)."""
    m = math.ceil(math.sqrt(2.0) * max(height, width))
    return m if m % 2 == 1 else m + 1


@dataclass(frozen=True)
class Geometry:
    """Immutable description of a parallel-beam scan.

    Parameters
    ----------
    image_height, image_width : int
        Reconstruction grid size in pixels.
    n_angles_full : int
        Number of equidistant projection angles on ``[0, pi)``.
    n_detectors : int, optional
        Detector bins per projection. Defaults to the smallest odd count
        covering the image diagonal.
    detector_spacing, pixel_spacing : float
        Physical bin / pixel sizes (same length unit).
    """

    image_height: int
    image_width: int
    n_angles_full: int
    n_detectors: int = 0
    detector_spacing: float = 1.0
    pixel_spacing: float = 1.0

    def __post_init__(self):
        if self.image_height < 1 or self.image_width < 1:
            raise ValueError("image dimensions must be positive")
        if self.n_angles_full < 1:
            raise ValueError("n_angles_full must be positive")
        if self.detector_spacing <= 0 or self.pixel_spacing <= 0:
            raise ValueError("spacings must be positive")
        if self.n_detectors == 0:
            object.__setattr__(
                self, "n_detectors",
                default_detector_count(self.image_height, self.image_width))
        diagonal = math.hypot(self.image_height, self.image_width)
        coverage = self.n_detectors * self.detector_spacing / self.pixel_spacing
        if coverage < diagonal - 1e-9:
            raise ValueError(
                f"detector row ({self.n_detectors} bins x {self.detector_spacing}) "
                f"does not cover the image diagonal ({diagonal:.1f} pixels)")

    @property
    def image_shape(self) -> tuple[int, int]:
        return (self.image_height, self.image_width)

    @property
    def angles(self) -> np.ndarray:
        """All projection angles in radians, strictly increasing in [0, pi)."""
        return np.arange(self.n_angles_full) * (np.pi / self.n_angles_full)

    def detector_coords(self) -> np.ndarray:
        """Physical detector bin centres, symmetric about 0."""
        d = self.n_detectors
        return (np.arange(d) - (d - 1) / 2.0) * self.detector_spacing
