"""Brute-force enumeration and the textbook reference implementation."""

import numpy as np
import pytest

from smpsim import (Group, Rng, SimConfig, count_blocking_pairs, draw_activation,
                    enumerate_stable, generate_preferences, reference_gs,
                    run_matching)
from smpsim.oracle import OracleSizeError, female_partner_from_male

from test_engine import prefs_from_lists


def test_one_by_one():
    prefs = prefs_from_lists([[0]], [[0]])
    ms = enumerate_stable(prefs)
    assert len(ms.matchings) == 1
    assert ms.is_stable == [True]
    assert ms.male_optimal.tolist() == [0]
    assert ms.female_optimal.tolist() == [0]


def test_two_by_two_unique_stable_matching():
    # the second perfect matching {m0-f0, m1-f1} is blocked by (m1, f0)
    prefs = prefs_from_lists([[0, 1], [0, 1]], [[1, 0], [0, 1]])
    ms = enumerate_stable(prefs)
    stable = ms.stable_matchings
    assert len(stable) == 1
    assert stable[0].tolist() == [1, 0]
    blocked = np.array([0, 1], np.int32)
    assert count_blocking_pairs(prefs, blocked,
                                female_partner_from_male(blocked, 2)) >= 1


def test_size_guard():
    prefs = generate_preferences(9, 9, Rng(0))
    with pytest.raises(OracleSizeError):
        enumerate_stable(prefs)


def test_guard_allows_asymmetric_large_side():
    prefs = generate_preferences(2, 12, Rng(0))
    enumerate_stable(prefs)  # min side is 2: fine


@pytest.mark.parametrize("n,m", [(4, 4), (3, 5), (5, 3)])
def test_engine_returns_male_optimal(n, m):
    for seed in range(25):
        rng = Rng(seed)
        prefs = generate_preferences(n, m, rng)
        config = SimConfig(n_males=n, n_females=m, alpha=0.0, beta=1.0, seed=seed)
        flags = draw_activation(config, rng)
        result = run_matching(config, prefs, flags, rng)
        truth = enumerate_stable(prefs)
        assert np.array_equal(result.male_partner, truth.male_optimal)
        assert result.blocking_pairs == 0


def test_lattice_property():
    # male-optimal weakly dominates every stable matching for every male
    # and is weakly dominated for every female
    for seed in range(15):
        prefs = generate_preferences(5, 5, Rng(seed))
        ms = enumerate_stable(prefs)
        opt_me = np.array([prefs.male_rank_of[i, ms.male_optimal[i]] for i in range(5)])
        opt_fp = female_partner_from_male(ms.male_optimal, 5)
        opt_fe = np.array([prefs.female_rank_of[j, opt_fp[j]] for j in range(5)])
        for matching in ms.stable_matchings:
            me = np.array([prefs.male_rank_of[i, matching[i]] for i in range(5)])
            fp = female_partner_from_male(matching, 5)
            fe = np.array([prefs.female_rank_of[j, fp[j]] for j in range(5)])
            assert np.all(opt_me <= me)
            assert np.all(opt_fe >= fe)


def test_stable_flags_match_blocking_counts():
    prefs = generate_preferences(4, 4, Rng(3))
    ms = enumerate_stable(prefs)
    assert any(ms.is_stable)
    for matching, stable in zip(ms.matchings, ms.is_stable):
        blocking = count_blocking_pairs(prefs, matching,
                                        female_partner_from_male(matching, 4))
        assert stable == (blocking == 0)


class TestReferenceGs:
    def test_two_males_one_female(self):
        prefs = generate_preferences(2, 1, Rng(4))
        result = reference_gs(prefs, Group.MALE)
        assert result.single_males == 1
        assert result.single_females == 0

    def test_matches_engine_one_sided(self):
        for seed in range(20):
            n, m = 30, 24
            rng = Rng(seed)
            prefs = generate_preferences(n, m, rng)
            config = SimConfig(n_males=n, n_females=m, alpha=0.0, beta=1.0, seed=seed)
            flags = draw_activation(config, rng)
            engine = run_matching(config, prefs, flags, rng)
            gs = reference_gs(prefs, Group.MALE)
            assert np.array_equal(engine.male_partner, gs.male_partner)
            assert np.array_equal(engine.female_partner, gs.female_partner)
            assert engine.proposal_events == gs.proposal_events

    def test_female_proposing_is_group_swap(self):
        prefs = generate_preferences(7, 9, Rng(11))
        direct = reference_gs(prefs, Group.FEMALE)
        swapped = reference_gs(prefs.transposed(), Group.MALE)
        assert np.array_equal(direct.female_partner, swapped.male_partner)
        assert np.array_equal(direct.male_partner, swapped.female_partner)
        assert direct.proposal_events == swapped.proposal_events

    def test_stability(self):
        for seed in range(10):
            prefs = generate_preferences(12, 15, Rng(seed))
            assert reference_gs(prefs, Group.MALE).blocking_pairs == 0
            assert reference_gs(prefs, Group.FEMALE).blocking_pairs == 0

    def test_reference_is_male_optimal(self):
        for seed in range(10):
            prefs = generate_preferences(5, 5, Rng(seed + 100))
            truth = enumerate_stable(prefs)
            gs = reference_gs(prefs, Group.MALE)
            assert np.array_equal(gs.male_partner, truth.male_optimal)
            fem = reference_gs(prefs, Group.FEMALE)
            assert np.array_equal(fem.male_partner, truth.female_optimal)
