"""Test-object generators: Shepp-Logan and random ellipse phantoms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Canonical ten-ellipse Shepp-Logan table: columns are
# (grey value, semi-axis a, semi-axis b, centre x, centre y, rotation rad)
# on the [-1, 1]^2 field of view.
SHEPP_LOGAN_ELLIPSES = np.array([
    [2.00, 0.6900, 0.9200,  0.00,  0.0000, 0.0],
    [-.98, 0.6624, 0.8740,  0.00, -0.0184, 0.0],
    [-.02, 0.1100, 0.3100,  0.22,  0.0000, -18.0 * np.pi / 180],
    [-.02, 0.1600, 0.4100, -0.22,  0.0000,  18.0 * np.pi / 180],
    [0.01, 0.2100, 0.2500,  0.00,  0.3500, 0.0],
    [0.01, 0.0460, 0.0460,  0.00,  0.1000, 0.0],
    [0.01, 0.0460, 0.0460,  0.00, -0.1000, 0.0],
    [0.01, 0.0460, 0.0230, -0.08, -0.6050, 0.0],
    [0.01, 0.0230, 0.0230,  0.00, -0.6050, 0.0],
    [0.01, 0.0230, 0.0460,  0.06, -0.6050, 0.0],
])

#: Toft's higher-contrast grey values for the same ten ellipses
SHEPP_LOGAN_MODIFIED_GREYS = np.array(
    [1.0, -0.8, -0.2, -0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1])

#: supersampling factor for anti-aliased rasterization; edge pixels get
#: their covered-area fraction instead of a hard 0/1 decision
DEFAULT_SUPERSAMPLE = 4


@dataclass(frozen=True)
class PhantomSpec:
    """Recipe for a generated phantom set.

    ``kind`` is ``"shepp-logan"`` (same image repeated) or
    ``"random-ellipses"``. Generated pixel values lie in [0, 1].
    """

    kind: str = "random-ellipses"
    size: int = 64
    seed: int = 0
    min_ellipses: int = 4
    max_ellipses: int = 8
    min_intensity: float = 0.15
    max_intensity: float = 0.5

    def __post_init__(self):
        if self.kind not in ("shepp-logan", "random-ellipses"):
            raise ValueError(f"unknown phantom kind {self.kind!r}")
        if self.size < 8:
            raise ValueError("phantom size must be at least 8")
        if not 1 <= self.min_ellipses <= self.max_ellipses:
            raise ValueError("need 1 <= min_ellipses <= max_ellipses")
        if not 0 < self.min_intensity <= self.max_intensity:
            raise ValueError("need 0 < min_intensity <= max_intensity")


def rasterize_ellipses(ellipses: np.ndarray, size: int,
                       supersample: int = DEFAULT_SUPERSAMPLE) -> np.ndarray:
    """Sum of constant-value ellipses on [-1, 1]^2, box-filtered to ``size``."""
    m = size * supersample
    grid = np.linspace(-1.0, 1.0, m)
    x, y = np.meshgrid(grid, -grid)
    img = np.zeros((m, m))
    for value, a, b, xc, yc, angle in ellipses:
        ct, st = np.cos(angle), np.sin(angle)
        inside = (((x - xc) * ct + (y - yc) * st) ** 2 / a ** 2
                  + ((x - xc) * st - (y - yc) * ct) ** 2 / b ** 2) <= 1.0
        img[inside] += value
    if supersample > 1:
        img = img.reshape(size, supersample, size, supersample).mean(axis=(1, 3))
    return img


def shepp_logan(size: int, variant: str = "canonical",
                supersample: int = DEFAULT_SUPERSAMPLE) -> np.ndarray:
    """Shepp-Logan head phantom, normalized to [0, 1].

    ``variant="canonical"`` uses the original grey values (scaled by the
    background density 2); ``"modified"`` uses Toft's higher-contrast
    values.
    """
    ellipses = SHEPP_LOGAN_ELLIPSES.copy()
    if variant == "modified":
        ellipses[:, 0] = SHEPP_LOGAN_MODIFIED_GREYS
        scale = 1.0
    elif variant == "canonical":
        scale = SHEPP_LOGAN_ELLIPSES[0, 0]
    else:
        raise ValueError(f"unknown Shepp-Logan variant {variant!r}")
    return rasterize_ellipses(ellipses, size, supersample) / scale


def random_ellipse_phantom(spec: PhantomSpec, rng: np.random.Generator) -> np.ndarray:
    """One random phantom: a background disk plus additive ellipses."""
    n = int(rng.integers(spec.min_ellipses, spec.max_ellipses + 1))
    rows = [(0.25, 0.85, 0.85, 0.0, 0.0, 0.0)]  # background disk
    for _ in range(n):
        value = rng.uniform(spec.min_intensity, spec.max_intensity)
        a = rng.uniform(0.08, 0.45)
        b = rng.uniform(0.08, 0.45)
        r = rng.uniform(0.0, 0.55)
        phi = rng.uniform(0.0, 2 * np.pi)
        angle = rng.uniform(0.0, np.pi)
        rows.append((value, a, b, r * np.cos(phi), r * np.sin(phi), angle))
    img = rasterize_ellipses(np.asarray(rows), spec.size)
    return np.clip(img, 0.0, 1.0)


def generate_phantoms(spec: PhantomSpec, n: int) -> list[np.ndarray]:
    """Generate ``n`` phantoms, deterministic per ``spec.seed``."""
    if n < 1:
        raise ValueError("need at least one phantom")
    if spec.kind == "shepp-logan":
        img = shepp_logan(spec.size)
        return [img.copy() for _ in range(n)]
    rng = np.random.default_rng(spec.seed)
    return [random_ellipse_phantom(spec, rng) for _ in range(n)]
