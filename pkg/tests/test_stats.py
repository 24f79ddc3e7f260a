import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from informality.stats import (
    EmptySampleError,
    NonPositiveValueError,
    WeightedSample,
    ge_curve,
    ge_index,
    weighted_mean,
)

# Frozen from a 50-digit arbitrary-precision evaluation of the closed form.
GE_1_3_UNIT = 0.12839307867102684   # values {1,3}, weights {1,1}
GE_1_3_W = 0.06811218176556344      # values {1,3}, weights {1,3}
GE_2_W = 0.030612244897959183       # values {2,4}, weights {1,3}
GE_05 = 0.2331456400847435          # values {1,2,5}, weights {2,1,1}, alpha 0.5
GE_NEG1 = 0.259375                  # same sample, alpha -1
MLD_W = 0.23528394296781735         # same sample, alpha 0
THEIL_W = 0.2372346641492704        # same sample, alpha 1


def sample(values, weights):
    return WeightedSample(np.asarray(values, float), np.asarray(weights, float))


positive_samples = st.lists(
    st.tuples(
        st.floats(min_value=1e-3, max_value=1e6),
        st.floats(min_value=1e-6, max_value=1e4),
    ),
    min_size=1,
    max_size=60,
)


class TestWeightedMean:
    def test_unit_weights(self):
        assert weighted_mean(sample([2, 4], [1, 1])) == 3.0

    def test_unequal_weights(self):
        assert weighted_mean(sample([2, 4], [1, 3])) == 3.5

    def test_single_item_is_identity(self):
        # w*x/w can be off by one rounding step for non-dyadic weights
        assert weighted_mean(sample([7.25], [0.4])) == pytest.approx(7.25, rel=1e-15)
        assert weighted_mean(sample([7.25], [0.5])) == 7.25

    def test_zero_weight_sample_raises(self):
        with pytest.raises(EmptySampleError):
            sample([1.0], [0.0])


class TestGEIndex:
    def test_equal_values_give_zero(self):
        for alpha in (-1.0, 0.0, 0.5, 1.0, 1.3, 2.0):
            s = sample([5.5] * 7, [1, 2, 3, 4, 5, 6, 7])
            assert ge_index(s, alpha).value == 0.0

    def test_alpha_two_is_half_squared_cv(self):
        # independent oracle: half the squared coefficient of variation
        assert ge_index(sample([1, 3], [1, 1]), 2).value == pytest.approx(0.125, abs=1e-15)
        vals = np.array([2.0, 3.0, 7.0, 9.0])
        mu = vals.mean()
        half_cv2 = float(((vals - mu) ** 2).mean() / (2 * mu * mu))
        got = ge_index(sample(vals, np.ones(4)), 2).value
        assert got == pytest.approx(half_cv2, rel=1e-13)

    @pytest.mark.parametrize(
        "values,weights,alpha,expected",
        [
            ([1, 3], [1, 1], 1.3, GE_1_3_UNIT),
            ([1, 3], [1, 3], 1.3, GE_1_3_W),
            ([2, 4], [1, 3], 2.0, GE_2_W),
            ([1, 2, 5], [2, 1, 1], 0.5, GE_05),
            ([1, 2, 5], [2, 1, 1], -1.0, GE_NEG1),
            ([1, 2, 5], [2, 1, 1], 0.0, MLD_W),
            ([1, 2, 5], [2, 1, 1], 1.0, THEIL_W),
        ],
    )
    def test_frozen_oracle_values(self, values, weights, alpha, expected):
        assert ge_index(sample(values, weights), alpha).value == pytest.approx(expected, abs=1e-12)

    def test_nonpositive_values_rejected(self):
        with pytest.raises(NonPositiveValueError):
            sample([1.0, 0.0], [1, 1])
        with pytest.raises(NonPositiveValueError):
            sample([1.0, -2.0], [1, 1])

    def test_zero_weight_items_are_dropped(self):
        a = ge_index(sample([1, 3, 50], [1, 1, 0]), 1.3)
        b = ge_index(sample([1, 3], [1, 1]), 1.3)
        assert a.value == b.value

    @given(positive_samples, st.sampled_from([-1.0, 0.0, 0.5, 1.0, 1.3, 2.0]))
    @settings(max_examples=80, deadline=None)
    def test_scale_invariance(self, pairs, alpha):
        s = WeightedSample.from_pairs(pairs)
        for c in (7.0, 1e-4, 123.456):
            scaled = WeightedSample(s.values * c, s.weights)
            assert scaled.values.min() > 0
            a = ge_index(s, alpha).value
            b = ge_index(scaled, alpha).value
            assert b == pytest.approx(a, rel=1e-12, abs=1e-12)

    @given(positive_samples, st.sampled_from([0.0, 1.0, 1.3, 2.0]))
    @settings(max_examples=80, deadline=None)
    def test_replication_invariance(self, pairs, alpha):
        s = WeightedSample.from_pairs(pairs)
        doubled = WeightedSample(s.values, s.weights * 2.0)
        assert ge_index(doubled, alpha).value == pytest.approx(
            ge_index(s, alpha).value, rel=1e-12, abs=1e-12
        )

    @given(positive_samples)
    @settings(max_examples=60, deadline=None)
    def test_weight_merge_invariance(self, pairs):
        # duplicating an item and splitting its weight changes nothing
        s = WeightedSample.from_pairs(pairs)
        y0, w0 = float(s.values[0]), float(s.weights[0])
        split = WeightedSample(
            np.concatenate(([y0, y0], s.values[1:])),
            np.concatenate(([w0 * 0.25, w0 * 0.75], s.weights[1:])),
        )
        assert ge_index(split, 1.3).value == pytest.approx(
            ge_index(s, 1.3).value, rel=1e-12, abs=1e-12
        )

    @given(positive_samples, st.sampled_from([-2.0, -1.0, 0.0, 0.5, 1.0, 1.3, 2.0, 3.0]))
    @settings(max_examples=100, deadline=None)
    def test_nonnegative(self, pairs, alpha):
        s = WeightedSample.from_pairs(pairs)
        assert ge_index(s, alpha).value >= 0.0

    def test_pigou_dalton_transfer_decreases_index(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            n = int(rng.integers(3, 12))
            values = rng.lognormal(0.0, 0.8, n) + 0.01
            weights = rng.uniform(0.5, 4.0, n)
            i, j = np.argmax(values), np.argmin(values)
            gap = values[i] - values[j]
            if gap <= 1e-9:
                continue
            transfer = gap * float(rng.uniform(0.05, 0.45))
            after = values.copy()
            after[i] -= transfer / weights[i]
            after[j] += transfer / weights[j]
            # keep it progressive: donor must stay at or above recipient
            if after[i] < after[j]:
                continue
            before_idx = ge_index(WeightedSample(values, weights), 1.3).value
            after_idx = ge_index(WeightedSample(after, weights), 1.3).value
            mean_before = weighted_mean(WeightedSample(values, weights))
            mean_after = weighted_mean(WeightedSample(after, weights))
            assert mean_after == pytest.approx(mean_before, rel=1e-12)
            assert after_idx < before_idx

    def test_limit_continuity_near_zero_and_one(self):
        rng = np.random.default_rng(11)
        s = WeightedSample(rng.lognormal(0, 0.6, 500), rng.uniform(0.5, 2.0, 500))
        eps = 1e-7
        mld = ge_index(s, 0.0).value
        theil = ge_index(s, 1.0).value
        assert abs(ge_index(s, eps).value - mld) < 1e-5
        assert abs(ge_index(s, -eps).value - mld) < 1e-5
        assert abs(ge_index(s, 1 + eps).value - theil) < 1e-5
        assert abs(ge_index(s, 1 - eps).value - theil) < 1e-5

    def test_thread_count_does_not_change_bits(self):
        rng = np.random.default_rng(13)
        s = WeightedSample(rng.lognormal(0, 1, 200_000), rng.uniform(0.1, 5.0, 200_000))
        for alpha in (0.0, 1.0, 1.3):
            assert ge_index(s, alpha, threads=1).value == ge_index(s, alpha, threads=4).value


class TestGECurve:
    def test_empty_alphas(self):
        assert ge_curve(sample([1, 2], [1, 1]), []) == []

    def test_repeated_alpha_is_deterministic(self):
        out = ge_curve(sample([1, 2, 4], [1, 1, 2]), [2.0, 2.0])
        assert out[0].value == out[1].value

    def test_curve_continuous_at_switch_points(self):
        rng = np.random.default_rng(3)
        s = WeightedSample(rng.lognormal(0, 0.5, 300), np.ones(300))
        out = ge_curve(s, [1e-7, 0.0])
        assert abs(out[0].value - out[1].value) < 1e-5
