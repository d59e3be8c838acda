import numpy as np
import pytest

from rashomon import Dataset, FlipVector, MetricKind, RashomonQuery, in_rashomon
from rashomon.oracle import enumerate_rashomon

from conftest import random_instance


class TestEnumerate:
    def test_t4_hand_enumeration(self, t4):
        result = enumerate_rashomon(RashomonQuery(t4, 0.1))
        assert result.size == 5
        assert np.allclose(result.exact_q, [0.0, 0.4, 0.2, 0.4])
        assert result.exact_min[MetricKind.PPR] == pytest.approx(0.0)
        assert result.exact_avg[MetricKind.PPR] == pytest.approx(0.5)
        flipped = {tuple(sorted(result.flip_vector(c).flipped_indices().tolist()))
                   for c in result.member_codes}
        assert flipped == {(), (3,), (1,), (1, 3), (2,)}

    def test_saturated_tolerance_gives_full_cube(self):
        ds = Dataset([0.9, 0.2, 0.6], [1, 0, 0])
        eps = ds.weights.sum() / ds.n
        result = enumerate_rashomon(RashomonQuery(ds, eps))
        assert result.size == 8
        assert np.allclose(result.exact_q, 0.5)

    def test_zero_tolerance_positive_weights(self):
        ds = Dataset([0.9, 0.2, 0.6], [1, 0, 0])
        result = enumerate_rashomon(RashomonQuery(ds, 0.0))
        assert result.size == 1
        assert np.all(result.exact_q == 0.0)

    def test_limit_guard(self):
        ds = Dataset(np.full(8, 0.7), [1] * 4 + [0] * 4)
        with pytest.raises(ValueError):
            enumerate_rashomon(RashomonQuery(ds, 0.1), limit=6)
        enumerate_rashomon(RashomonQuery(ds, 0.1), limit=8)  # explicit override

    def test_membership_matches_core_predicate(self):
        rng = np.random.default_rng(19)
        for _ in range(30):
            ds, eps = random_instance(rng, n_max=10)
            query = RashomonQuery(ds, eps)
            result = enumerate_rashomon(query)
            members = set(result.member_codes.tolist())
            for code in range(1 << ds.n):
                bits = (code >> np.arange(ds.n)) & 1
                assert (code in members) == in_rashomon(query, FlipVector(bits.astype(np.uint8)))

    def test_deterministic(self, t4):
        a = enumerate_rashomon(RashomonQuery(t4, 0.1))
        b = enumerate_rashomon(RashomonQuery(t4, 0.1))
        assert np.array_equal(a.member_codes, b.member_codes)
        assert np.array_equal(a.exact_q, b.exact_q)
        assert a.exact_avg == b.exact_avg

    def test_single_group_dataset_still_counts(self):
        # no disparity metrics, but sizes and flip frequencies remain exact
        ds = Dataset([0.9, 0.6], [1, 1])
        result = enumerate_rashomon(RashomonQuery(ds, 0.11))
        assert result.size == 2  # {} and {1} (w 0.2 <= 0.22)
        assert result.exact_min == {}

    def test_exact_q_definition(self):
        rng = np.random.default_rng(91)
        ds, eps = random_instance(rng, n_max=8)
        result = enumerate_rashomon(RashomonQuery(ds, eps))
        members = [result.flip_vector(c).bits for c in result.member_codes]
        manual = np.mean(members, axis=0)
        assert np.allclose(result.exact_q, manual)
