import numpy as np
import pytest

from rashomon import (
    DataRecord,
    Dataset,
    FlipVector,
    MetricKind,
    RashomonQuery,
    accuracy,
    disparity,
    flip_values,
    in_rashomon,
    used_tolerance,
)

from conftest import random_instance


class TestDataRecord:
    def test_weight_and_prediction(self):
        r = DataRecord(0, 0.9, 1)
        assert r.weight == pytest.approx(0.8)
        assert r.bayes_pred == 1

    def test_tie_predicts_zero_with_zero_weight(self):
        r = DataRecord(0, 0.5, 0)
        assert r.bayes_pred == 0
        assert r.weight == 0.0

    def test_out_of_range_probability_rejected(self):
        with pytest.raises(ValueError):
            DataRecord(0, 1.2, 0)

    def test_bad_group_rejected(self):
        with pytest.raises(ValueError):
            DataRecord(0, 0.5, 2)


class TestDataset:
    def test_t4_derived_arrays(self, t4):
        assert np.allclose(t4.weights, [0.8, 0.2, 0.4, 0.1])
        assert np.array_equal(t4.bayes_preds, [1, 1, 0, 0])
        assert t4.n == 4

    def test_round_trip_through_records(self, t4):
        again = Dataset.from_records(t4.records())
        assert np.array_equal(again.p, t4.p)
        assert np.array_equal(again.group, t4.group)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            Dataset([], [])

    def test_immutable(self, t4):
        with pytest.raises(ValueError):
            t4.p[0] = 0.2

    def test_y_carried_but_optional(self):
        ds = Dataset([0.7, 0.2], [1, 0], [1, 0])
        assert np.array_equal(ds.y, [1, 0])
        assert Dataset([0.7, 0.2], [1, 0]).y is None


class TestAccuracy:
    def test_bayes_accuracy(self, t4):
        assert accuracy(t4, FlipVector.zeros(4)) == pytest.approx(0.6875)

    def test_all_flipped_is_complement(self, t4):
        assert accuracy(t4, FlipVector([1, 1, 1, 1])) == pytest.approx(0.3125)

    def test_single_flip_costs_its_weight(self, t4):
        assert accuracy(t4, FlipVector.from_indices(4, [3])) == pytest.approx(0.6625)

    def test_length_mismatch(self, t4):
        with pytest.raises(ValueError):
            accuracy(t4, FlipVector.zeros(5))

    def test_accuracy_identity_random(self):
        # acc(theta) + used_tolerance(theta) == acc(0) for every theta
        rng = np.random.default_rng(11)
        for _ in range(200):
            ds, _ = random_instance(rng)
            bits = rng.integers(0, 2, size=ds.n, dtype=np.uint8)
            flip = FlipVector(bits)
            lhs = accuracy(ds, flip) + used_tolerance(ds, flip)
            assert lhs == pytest.approx(accuracy(ds, FlipVector.zeros(ds.n)), abs=1e-12)


class TestMembership:
    def test_t4_examples(self, t4):
        q = RashomonQuery(t4, 0.1)
        assert in_rashomon(q, FlipVector.from_indices(4, [1, 3]))
        assert not in_rashomon(q, FlipVector.from_indices(4, [0]))

    def test_zero_vector_always_member(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            ds, eps = random_instance(rng)
            assert in_rashomon(RashomonQuery(ds, eps), FlipVector.zeros(ds.n))

    def test_exact_boundary_accepted(self):
        ds = Dataset([0.75, 0.3], [1, 0])  # weights 0.5, 0.4
        q = RashomonQuery(ds, 0.25)
        assert in_rashomon(q, FlipVector.from_indices(2, [0]))  # 0.5/2 == 0.25 exactly

    def test_monotone_clearing_bits(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            ds, eps = random_instance(rng)
            q = RashomonQuery(ds, eps)
            bits = rng.integers(0, 2, size=ds.n, dtype=np.uint8)
            if not in_rashomon(q, FlipVector(bits)):
                continue
            ones = np.flatnonzero(bits)
            if ones.size:
                cleared = bits.copy()
                cleared[rng.choice(ones)] = 0
                assert in_rashomon(q, FlipVector(cleared))

    def test_negative_epsilon_rejected(self, t4):
        with pytest.raises(ValueError):
            RashomonQuery(t4, -0.01)

    def test_small_epsilon_flag(self, t4):
        # mean weight 0.375, so the regime boundary is 0.1875
        assert RashomonQuery(t4, 0.1).small_epsilon
        assert not RashomonQuery(t4, 0.2).small_epsilon


class TestDisparity:
    def test_t4_initial_disparities(self, t4):
        z = FlipVector.zeros(4)
        for metric in MetricKind:
            assert disparity(t4, z, metric) == pytest.approx(1.0)

    def test_t4_balanced_after_two_flips(self, t4):
        assert disparity(t4, FlipVector.from_indices(4, [1, 3]),
                         MetricKind.PPR) == pytest.approx(0.0)

    def test_matches_raw_group_sums(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            ds, _ = random_instance(rng)
            z = FlipVector.zeros(ds.n)
            a = ds.group == 1
            preds = ds.bayes_preds
            ppr = abs(preds[a].mean() - preds[~a].mean())
            assert disparity(ds, z, MetricKind.PPR) == pytest.approx(ppr, abs=1e-12)
            fp_a = ((1 - ds.p[a]) * preds[a]).sum() / (1 - ds.p[a]).sum()
            fp_b = ((1 - ds.p[~a]) * preds[~a]).sum() / (1 - ds.p[~a]).sum()
            assert disparity(ds, z, MetricKind.FPR) == pytest.approx(abs(fp_a - fp_b), abs=1e-12)

    def test_single_group_rejected(self):
        ds = Dataset([0.2, 0.7], [1, 1])
        with pytest.raises(ValueError):
            disparity(ds, FlipVector.zeros(2), MetricKind.PPR)

    def test_zero_denominator_rejected(self):
        ds = Dataset([1.0, 1.0, 0.3], [1, 1, 0])  # group A has no negative mass
        with pytest.raises(ValueError):
            disparity(ds, FlipVector.zeros(3), MetricKind.FPR)

    def test_nonnegative(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            ds, _ = random_instance(rng)
            bits = rng.integers(0, 2, size=ds.n, dtype=np.uint8)
            for metric in MetricKind:
                assert disparity(ds, FlipVector(bits), metric) >= 0.0


class TestFlipValues:
    def test_t4_ppr(self, t4):
        values = flip_values(t4, MetricKind.PPR)
        assert values.high_group == 1
        assert np.allclose(values.values, [0.5, 0.5, 0.5, 0.5])

    def test_t4_fpr(self, t4):
        values = flip_values(t4, MetricKind.FPR)
        assert np.allclose(values.values, [0.2, 0.8, 0.56, 0.44])

    def test_t4_tpr(self, t4):
        # A-side: p / 1.5; B-side: p / 0.75
        values = flip_values(t4, MetricKind.TPR)
        assert np.allclose(values.values, [0.6, 0.4, 0.4, 0.6])

    def test_tied_groups_have_no_improving_flips(self):
        ds = Dataset([0.8, 0.8], [1, 0])
        values = flip_values(ds, MetricKind.PPR)
        assert values.high_group is None
        assert np.all(values.values == 0.0)

    def test_values_predict_disparity_reduction(self):
        # sum of v_i over a flip set equals the realized reduction while the
        # reduction does not cross zero
        rng = np.random.default_rng(41)
        tried = 0
        for _ in range(300):
            ds, _ = random_instance(rng)
            for metric in MetricKind:
                try:
                    values = flip_values(ds, metric)
                except ValueError:
                    continue
                if values.high_group is None:
                    continue
                improvable = np.flatnonzero(values.values > 0)
                if improvable.size == 0:
                    continue
                k = int(rng.integers(1, improvable.size + 1))
                subset = rng.choice(improvable, size=k, replace=False)
                claimed = values.values[subset].sum()
                before = disparity(ds, FlipVector.zeros(ds.n), metric)
                if claimed > before:  # reduction would cross zero; caveat applies
                    continue
                after = disparity(ds, FlipVector.from_indices(ds.n, subset), metric)
                assert before - after == pytest.approx(claimed, abs=1e-10)
                tried += 1
        assert tried > 100
