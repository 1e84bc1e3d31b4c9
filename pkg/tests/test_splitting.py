import numpy as np
import pytest

from sparse2inverse import (Geometry, fbp, make_partition, make_selection,
                            network_input, psnr, radon, restrict, shepp_logan,
                            target_data)


class TestMakePartition:
    def test_modular_folds_l16_k4(self):
        part = make_partition(16, 4)
        assert part.folds == ((0, 4, 8, 12), (1, 5, 9, 13),
                              (2, 6, 10, 14), (3, 7, 11, 15))

    def test_singleton_folds(self):
        part = make_partition(4, 4)
        assert part.folds == ((0,), (1,), (2,), (3,))

    def test_uneven_fold_sizes(self):
        part = make_partition(17, 4)
        assert sorted(len(f) for f in part.folds) == [4, 4, 4, 5]
        assert len(part.folds[0]) == 5

    def test_folds_partition_everything(self):
        part = make_partition(23, 5)
        union = sorted(j for f in part.folds for j in f)
        assert union == list(range(23))

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            make_partition(3, 4)
        with pytest.raises(ValueError):
            make_partition(16, 1)


class TestMakeSelection:
    @pytest.mark.parametrize("k,p", [(4, 1), (4, 2), (4, 3), (5, 2)])
    def test_member_count_is_binomial(self, k, p):
        from math import comb
        sel = make_selection(make_partition(20, k), p)
        assert len(sel) == comb(k, p)

    def test_input_and_target_partition_all_angles(self):
        part = make_partition(16, 4)
        for p in (1, 2, 3):
            sel = make_selection(part, p)
            for inp, tgt in zip(sel.input_angle_ids, sel.target_angle_ids):
                assert sorted(inp + tgt) == list(range(16))
                assert not set(inp) & set(tgt)

    def test_p1_target_rows(self):
        sel = make_selection(make_partition(16, 4), 1)
        assert sel.target_angle_ids[0] == (1, 2, 3, 5, 6, 7, 9, 10, 11, 13, 14, 15)

    def test_p3_target_is_remaining_fold(self):
        sel = make_selection(make_partition(16, 4), 3)
        member = sel.members.index((0, 1, 2))
        assert sel.target_angle_ids[member] == (3, 7, 11, 15)

    def test_target_rows_cover_each_angle_k_minus_1_times(self):
        sel = make_selection(make_partition(16, 4), 1)
        counts = np.zeros(16, dtype=int)
        for tgt in sel.target_angle_ids:
            counts[list(tgt)] += 1
        assert np.all(counts == 3)

    def test_p_equals_k_rejected(self):
        part = make_partition(16, 4)
        with pytest.raises(ValueError):
            make_selection(part, 4)
        with pytest.raises(ValueError):
            make_selection(part, 0)


@pytest.fixture(scope="module")
def setup():
    geom = Geometry(64, 64, n_angles_full=16)
    phantom = shepp_logan(64)
    sino = radon(phantom, geom)
    part = make_partition(16, 4)
    return geom, phantom, sino, part


class TestNetworkInputAndTarget:

    def test_p1_input_is_single_fold_fbp(self, setup):
        geom, _, sino, part = setup
        sel = make_selection(part, 1)
        got = network_input(sino, part, sel, 0, geom)
        expected = fbp(restrict(sino, part.fold_ids(0)), geom)
        np.testing.assert_array_equal(got, expected)

    def test_p2_input_is_mean_of_fold_fbps(self, setup):
        geom, _, sino, part = setup
        sel = make_selection(part, 2)
        member = sel.members.index((0, 1))
        got = network_input(sino, part, sel, member, geom)
        a = fbp(restrict(sino, part.fold_ids(0)), geom)
        b = fbp(restrict(sino, part.fold_ids(1)), geom)
        np.testing.assert_array_equal(got, (a + b) / 2.0)

    def test_subset_input_worse_than_full_fbp(self, setup):
        geom, phantom, sino, part = setup
        sel = make_selection(part, 1)
        sub = network_input(sino, part, sel, 0, geom)
        full = fbp(sino, geom)
        assert psnr(sub, phantom, data_range=1.0) < psnr(full, phantom, data_range=1.0)

    def test_target_rows_match_complement(self, setup):
        geom, _, sino, part = setup
        sel = make_selection(part, 1)
        tgt = target_data(sino, part, sel, 0)
        np.testing.assert_array_equal(tgt.angle_ids, sel.target_angle_ids[0])
        np.testing.assert_array_equal(
            tgt.data, sino.data[list(sel.target_angle_ids[0])])

    def test_input_and_target_use_disjoint_rows(self, setup):
        geom, _, sino, part = setup
        for p in (1, 2):
            sel = make_selection(part, p)
            for m in range(len(sel)):
                assert not (set(sel.input_angle_ids[m])
                            & set(target_data(sino, part, sel, m).angle_ids))

    def test_inconsistent_partition_rejected(self, setup):
        geom, _, sino, part = setup
        bad_part = make_partition(8, 4)
        sel = make_selection(bad_part, 1)
        with pytest.raises(ValueError):
            network_input(sino, bad_part, sel, 0, geom)
