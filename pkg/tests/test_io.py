import numpy as np
import pytest
from PIL import Image as PILImage

from sparse2inverse import PhantomSpec, generate_phantoms
from sparse2inverse.io import ingest_dataset, load_grid, save_grid, save_png


class TestTom1RoundTrip:
    def test_lossless_float32_round_trip(self, tmp_path, rng):
        grid = rng.standard_normal((37, 53)).astype(np.float32)
        path = tmp_path / "grid.tom"
        save_grid(path, grid)
        back = load_grid(path)
        assert back.dtype == np.float32
        np.testing.assert_array_equal(back, grid)

    def test_header_layout(self, tmp_path):
        path = tmp_path / "g.tom"
        save_grid(path, np.zeros((3, 5), dtype=np.float32))
        raw = path.read_bytes()
        assert raw[:4] == b"TOM1"
        assert int.from_bytes(raw[4:8], "little") == 3
        assert int.from_bytes(raw[8:12], "little") == 5
        assert int.from_bytes(raw[12:16], "little") == 0
        assert len(raw) == 16 + 3 * 5 * 4

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "bad.tom"
        path.write_bytes(b"NOPE" + b"\0" * 20)
        with pytest.raises(ValueError, match="magic"):
            load_grid(path)

    def test_truncated_payload_rejected(self, tmp_path):
        path = tmp_path / "short.tom"
        save_grid(path, np.zeros((4, 4), dtype=np.float32))
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(ValueError, match="truncated"):
            load_grid(path)

    def test_non_2d_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            save_grid(tmp_path / "x.tom", np.zeros((2, 2, 2)))


class TestPngExport:
    def test_windowed_uint8(self, tmp_path, rng):
        img = rng.random((24, 24)) * 7.0 - 3.0
        path = tmp_path / "img.png"
        save_png(path, img)
        loaded = np.asarray(PILImage.open(path))
        assert loaded.dtype == np.uint8
        assert loaded.min() == 0 and loaded.max() == 255

    def test_constant_image(self, tmp_path):
        save_png(tmp_path / "c.png", np.full((8, 8), 2.5))
        loaded = np.asarray(PILImage.open(tmp_path / "c.png"))
        assert np.all(loaded == 0)


class TestIngestDataset:
    def _export(self, tmp_path, images):
        for i, img in enumerate(images):
            save_grid(tmp_path / f"img_{i:03d}.tom", img)

    def test_round_trip_matches_normalized_originals(self, tmp_path):
        phantoms = generate_phantoms(PhantomSpec(size=32, seed=0), 3)
        self._export(tmp_path, phantoms)
        ingested = ingest_dataset(tmp_path, expected_size=32)
        stack = np.stack([p.astype(np.float32) for p in phantoms]).astype(np.float64)
        lo, hi = stack.min(), stack.max()
        for got, orig in zip(ingested, stack):
            np.testing.assert_array_equal(got, (orig - lo) / (hi - lo))

    def test_sorted_by_filename(self, tmp_path):
        save_grid(tmp_path / "b.tom", np.full((4, 4), 2.0, dtype=np.float32))
        save_grid(tmp_path / "a.tom", np.zeros((4, 4), dtype=np.float32))
        imgs = ingest_dataset(tmp_path)
        assert imgs[0].max() == 0.0 and imgs[1].min() == 1.0

    def test_empty_directory(self, tmp_path):
        with pytest.raises(ValueError, match="no files"):
            ingest_dataset(tmp_path)

    def test_mixed_sizes_name_offender(self, tmp_path):
        save_grid(tmp_path / "a.tom", np.zeros((8, 8), dtype=np.float32))
        save_grid(tmp_path / "b.tom", np.ones((9, 9), dtype=np.float32))
        with pytest.raises(ValueError, match="b.tom"):
            ingest_dataset(tmp_path)

    def test_expected_size_enforced(self, tmp_path):
        save_grid(tmp_path / "a.tom", np.random.rand(8, 8).astype(np.float32))
        with pytest.raises(ValueError, match="a.tom"):
            ingest_dataset(tmp_path, expected_size=16)

    def test_malformed_file_named(self, tmp_path):
        (tmp_path / "junk.tom").write_bytes(b"garbage!")
        with pytest.raises(ValueError, match="junk.tom"):
            ingest_dataset(tmp_path)
