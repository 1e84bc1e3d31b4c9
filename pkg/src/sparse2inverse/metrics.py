"""SSIM and PSNR image-quality metrics."""

from __future__ import annotations

import numpy as np
from scipy.ndimage import gaussian_filter

from .validation import check_same_shape

#: PSNR returned for a zero-MSE pair instead of +inf.
PSNR_CAP_DB = 300.0

_SSIM_WINDOW = 11
_SSIM_SIGMA = 1.5


def psnr(a, b, data_range: float | None = None) -> float:
    """Peak signal-to-noise ratio of ``a`` against reference ``b`` in dB.

    ``data_range`` defaults to ``b.max() - b.min()``. Identical images
    return the ``PSNR_CAP_DB`` sentinel.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    check_same_shape(a, b)
    if data_range is None:
        data_range = float(b.max() - b.min())
    if data_range <= 0:
        raise ValueError("data_range must be positive")
    mse = np.mean((a - b) ** 2)
    if mse == 0.0:
        return PSNR_CAP_DB
    return min(PSNR_CAP_DB, float(10.0 * np.log10(data_range ** 2 / mse)))


def ssim(a, b, data_range: float | None = None) -> float:
    """Structural similarity index between two equal-shape images.

    Uses the standard 11x11 Gaussian window (sigma 1.5) with
    ``C1 = (0.01 range)^2`` and ``C2 = (0.03 range)^2``; the SSIM map is
    averaged over fully valid window positions (half-window border
    cropped).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    check_same_shape(a, b)
    if min(a.shape) < _SSIM_WINDOW:
        raise ValueError(
            f"images must be at least {_SSIM_WINDOW} pixels per side, got {a.shape}")
    if data_range is None:
        data_range = float(b.max() - b.min())
    if data_range <= 0:
        raise ValueError("data_range must be positive")

    # truncate chosen so the Gaussian support is exactly the 11-tap window
    radius = (_SSIM_WINDOW - 1) // 2
    truncate = radius / _SSIM_SIGMA

    def smooth(img):
        return gaussian_filter(img, sigma=_SSIM_SIGMA, truncate=truncate)

    mu_a = smooth(a)
    mu_b = smooth(b)
    var_a = smooth(a * a) - mu_a * mu_a
    var_b = smooth(b * b) - mu_b * mu_b
    cov = smooth(a * b) - mu_a * mu_b

    c1 = (0.01 * data_range) ** 2
    c2 = (0.03 * data_range) ** 2
    ssim_map = ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) / (
        (mu_a ** 2 + mu_b ** 2 + c1) * (var_a + var_b + c2))
    interior = ssim_map[radius:-radius, radius:-radius]
    return float(interior.mean())
