import numpy as np
import pytest
from skimage.metrics import structural_similarity as sk_ssim

from sparse2inverse import psnr, shepp_logan, ssim
from sparse2inverse.metrics import PSNR_CAP_DB


class TestPSNR:
    def test_identical_images_hit_cap(self, rng):
        x = rng.random((32, 32))
        assert psnr(x, x, data_range=1.0) == PSNR_CAP_DB

    def test_analytic_values(self):
        ref = np.zeros((16, 16))
        assert psnr(np.full((16, 16), 0.1), ref, data_range=1.0) == pytest.approx(20.0)
        assert psnr(np.full((16, 16), 0.5), ref, data_range=1.0) == pytest.approx(
            6.0206, abs=1e-4)

    def test_default_range_from_reference(self, rng):
        ref = rng.random((32, 32)) * 3.0
        assert psnr(ref + 0.1, ref) == pytest.approx(
            psnr(ref + 0.1, ref, data_range=float(ref.max() - ref.min())))

    def test_decreases_with_noise_level(self, rng):
        ref = shepp_logan(64)
        values = [psnr(ref + sigma * rng.standard_normal(ref.shape), ref,
                       data_range=1.0)
                  for sigma in (0.01, 0.05, 0.1)]
        assert values[0] > values[1] > values[2]

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            psnr(np.zeros((8, 8)), np.zeros((8, 9)), data_range=1.0)


class TestSSIM:
    def test_self_similarity_is_one(self, rng):
        x = rng.random((32, 32))
        assert ssim(x, x, data_range=1.0) == 1.0

    def test_matches_reference_implementation(self, rng):
        # oracle: skimage with the same 11x11 Gaussian / no-sample-cov
        # configuration; pre-build run agreed to machine precision
        for _ in range(5):
            a = rng.random((40, 56))
            b = rng.random((40, 56))
            ref = sk_ssim(a, b, data_range=1.0, gaussian_weights=True,
                          sigma=1.5, use_sample_covariance=False, win_size=11)
            assert ssim(a, b, data_range=1.0) == pytest.approx(ref, abs=1e-6)

    def test_contrast_inversion_negative_on_shepp_logan(self):
        # sign verified with the reference formula pre-build: -0.0440 on
        # the modified variant (the canonical grey values give +0.288)
        ph = shepp_logan(128, variant="modified")
        inverted = -ph + ph.max() + ph.min()
        value = ssim(ph, inverted, data_range=1.0)
        assert value < 0
        assert value == pytest.approx(-0.04400, abs=1e-4)

    def test_symmetry(self, rng):
        a, b = rng.random((32, 32)), rng.random((32, 32))
        assert ssim(a, b, data_range=1.0) == pytest.approx(
            ssim(b, a, data_range=1.0), abs=1e-12)

    def test_rejects_small_images(self):
        with pytest.raises(ValueError):
            ssim(np.zeros((10, 32)), np.zeros((10, 32)), data_range=1.0)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            ssim(np.zeros((32, 32)), np.zeros((32, 33)), data_range=1.0)
