"""Preference generation and activation sampling."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smpsim import (ActivationMode, Rng, SimConfig, assign_active,
                    draw_activation, generate_preferences)


class TestSimConfig:
    def test_accepts_valid(self):
        SimConfig(n_males=2, n_females=3, alpha=0.5, beta=1.0, seed=0)

    @pytest.mark.parametrize("kwargs", [
        dict(n_males=0, n_females=1, alpha=0, beta=0, seed=0),
        dict(n_males=1, n_females=0, alpha=0, beta=0, seed=0),
        dict(n_males=1, n_females=1, alpha=-0.1, beta=0, seed=0),
        dict(n_males=1, n_females=1, alpha=1.1, beta=0, seed=0),
        dict(n_males=1, n_females=1, alpha=0, beta=-1, seed=0),
        dict(n_males=1, n_females=1, alpha=0, beta=2, seed=0),
        dict(n_males=1, n_females=1, alpha=0, beta=0, seed=2**64),
    ])
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValueError):
            SimConfig(**kwargs)


class TestGeneratePreferences:
    def test_single_female_column(self):
        prefs = generate_preferences(4, 1, Rng(3))
        assert np.array_equal(prefs.male_prefs, np.zeros((4, 1), np.int32))
        assert np.array_equal(prefs.male_rank_of, np.ones((4, 1), np.int32))

    @given(st.integers(min_value=0, max_value=2**64 - 1),
           st.integers(min_value=1, max_value=12),
           st.integers(min_value=1, max_value=12))
    @settings(max_examples=60, deadline=None)
    def test_rows_are_permutations_with_exact_inverses(self, seed, n, m):
        prefs = generate_preferences(n, m, Rng(seed))
        for row in prefs.male_prefs:
            assert sorted(row.tolist()) == list(range(m))
        for row in prefs.female_prefs:
            assert sorted(row.tolist()) == list(range(n))
        for i in range(n):
            for j in range(m):
                assert prefs.male_prefs[i, prefs.male_rank_of[i, j] - 1] == j
        for j in range(m):
            for i in range(n):
                assert prefs.female_prefs[j, prefs.female_rank_of[j, i] - 1] == i

    def test_deterministic_by_seed(self):
        a = generate_preferences(6, 9, Rng(1234))
        b = generate_preferences(6, 9, Rng(1234))
        assert np.array_equal(a.male_prefs, b.male_prefs)
        assert np.array_equal(a.female_prefs, b.female_prefs)

    def test_top_choice_uniformity(self):
        # over many seeds with 3 females, male 0's top pick is female 0
        # in 1/3 +- 0.02 of draws
        hits = 0
        draws = 10_000
        for seed in range(draws):
            prefs = generate_preferences(1, 3, Rng(seed))
            hits += prefs.male_prefs[0, 0] == 0
        assert abs(hits / draws - 1 / 3) < 0.02

    def test_transposed_swaps_groups(self):
        prefs = generate_preferences(3, 5, Rng(9))
        t = prefs.transposed()
        assert t.n_males == 5 and t.n_females == 3
        assert np.array_equal(t.male_prefs, prefs.female_prefs)
        assert np.array_equal(t.female_rank_of, prefs.male_rank_of)


class TestAssignActive:
    def test_p_zero_bernoulli_all_false(self):
        flags = assign_active(1000, 0.0, ActivationMode.BERNOULLI, Rng(5))
        assert not flags.any()

    def test_p_one_bernoulli_all_true(self):
        flags = assign_active(1000, 1.0, ActivationMode.BERNOULLI, Rng(5))
        assert flags.all()

    def test_p_one_exact_all_true(self):
        flags = assign_active(1000, 1.0, ActivationMode.EXACT_COUNT, Rng(5))
        assert flags.all()

    def test_p_zero_exact_all_false(self):
        flags = assign_active(1000, 0.0, ActivationMode.EXACT_COUNT, Rng(5))
        assert not flags.any()

    def test_exact_count_is_exact(self):
        flags = assign_active(1000, 0.5, ActivationMode.EXACT_COUNT, Rng(5))
        assert flags.sum() == 500

    @given(st.integers(min_value=0, max_value=2**32),
           st.integers(min_value=1, max_value=200),
           st.floats(min_value=0.0, max_value=1.0, allow_nan=False))
    @settings(max_examples=100, deadline=None)
    def test_exact_count_matches_rounding(self, seed, size, p):
        flags = assign_active(size, p, ActivationMode.EXACT_COUNT, Rng(seed))
        assert flags.sum() == int(np.floor(p * size + 0.5))

    def test_bernoulli_calibration(self):
        # p=0.3 over 10,000 members: within 4 sigma of the binomial mean
        flags = assign_active(10_000, 0.3, ActivationMode.BERNOULLI, Rng(77))
        sigma = np.sqrt(10_000 * 0.3 * 0.7)
        assert abs(int(flags.sum()) - 3000) < 4 * sigma

    def test_exact_count_choice_is_uniform(self):
        # each member selected ~k/n of the time across seeds
        size, p, draws = 10, 0.3, 4000
        counts = np.zeros(size)
        for seed in range(draws):
            counts += assign_active(size, p, ActivationMode.EXACT_COUNT, Rng(seed))
        freq = counts / draws
        assert np.all(np.abs(freq - 0.3) < 0.03)

    def test_rejects_bad_probability(self):
        with pytest.raises(ValueError):
            assign_active(10, 1.5, ActivationMode.BERNOULLI, Rng(0))


def test_draw_activation_order_is_males_then_females():
    config = SimConfig(n_males=50, n_females=70, alpha=0.4, beta=0.6, seed=31)
    rng = Rng(31)
    flags = draw_activation(config, rng)
    rng2 = Rng(31)
    male = assign_active(50, 0.6, ActivationMode.BERNOULLI, rng2)
    female = assign_active(70, 0.4, ActivationMode.BERNOULLI, rng2)
    assert np.array_equal(flags.male_active, male)
    assert np.array_equal(flags.female_active, female)
    assert rng.state == rng2.state
