"""Ground truth for small instances: exhaustive stable-matching enumeration
and an independent textbook deferred-acceptance implementation.

Both exist to validate the queue engine, so they deliberately share no code
with it: ``reference_gs`` is a plain free-list loop over Python lists, and
``enumerate_stable`` checks every injection of the smaller group by brute
force.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import Group, PreferenceSystem
from .engine import MatchResult, count_blocking_pairs

MAX_ENUMERATION_SIZE = 8


class OracleSizeError(ValueError):
    """Raised when an instance is too large to enumerate."""


@dataclass
class MatchingSet:
    """All candidate matchings of an instance, with stability flags.

    Matchings are stored as male-partner arrays (female index per male,
    -1 for single).  A matching is stable iff it has zero blocking pairs;
    candidates leaving a smaller-group member single are never stable, so
    enumeration covers exactly the injections of the smaller group.
    """

    matchings: list
    is_stable: list
    male_optimal: np.ndarray
    female_optimal: np.ndarray

    @property
    def stable_matchings(self) -> list:
        return [m for m, s in zip(self.matchings, self.is_stable) if s]


def female_partner_from_male(male_partner: np.ndarray, n_females: int) -> np.ndarray:
    """Invert a male-partner array into the female-partner array."""
    female_partner = np.full(n_females, -1, np.int32)
    matched = np.flatnonzero(male_partner >= 0)
    female_partner[male_partner[matched]] = matched
    return female_partner


def enumerate_stable(prefs: PreferenceSystem) -> MatchingSet:
    """Brute-force every maximal matching and classify stability.

    Also identifies the male-optimal stable matching two independent ways
    (elementwise rank domination, and minimal total male energy) and
    insists they agree; likewise female-optimal.
    """
    n, m = prefs.n_males, prefs.n_females
    if min(n, m) > MAX_ENUMERATION_SIZE:
        raise OracleSizeError(
            f"refusing to enumerate: min group size {min(n, m)} exceeds "
            f"{MAX_ENUMERATION_SIZE} (factorial growth)")

    matchings: list[np.ndarray] = []
    is_stable: list[bool] = []
    stable_male_energy: list[np.ndarray] = []
    stable_female_energy: list[np.ndarray] = []
    stable_idx: list[int] = []

    if n <= m:
        candidates = (np.array(p, np.int32) for p in itertools.permutations(range(m), n))
    else:
        def _from_female_side():
            for p in itertools.permutations(range(n), m):
                male_partner = np.full(n, -1, np.int32)
                male_partner[list(p)] = np.arange(m, dtype=np.int32)
                yield male_partner
        candidates = _from_female_side()

    arange_n = np.arange(n)
    arange_m = np.arange(m)
    for male_partner in candidates:
        female_partner = female_partner_from_male(male_partner, m)
        blocking = count_blocking_pairs(prefs, male_partner, female_partner)
        matchings.append(male_partner)
        stable = blocking == 0
        is_stable.append(stable)
        if stable:
            male_energy = np.where(
                male_partner >= 0,
                prefs.male_rank_of[arange_n, np.maximum(male_partner, 0)], m + 1)
            female_energy = np.where(
                female_partner >= 0,
                prefs.female_rank_of[arange_m, np.maximum(female_partner, 0)], n + 1)
            stable_male_energy.append(male_energy)
            stable_female_energy.append(female_energy)
            stable_idx.append(len(matchings) - 1)

    if not stable_idx:
        raise RuntimeError("no stable matching found; enumeration is broken")

    male_optimal = _select_optimal(matchings, stable_idx, stable_male_energy)
    female_optimal = _select_optimal(matchings, stable_idx, stable_female_energy)
    return MatchingSet(matchings=matchings, is_stable=is_stable,
                       male_optimal=male_optimal, female_optimal=female_optimal)


def _select_optimal(matchings, stable_idx, stable_energies) -> np.ndarray:
    """The stable matching that dominates its side, cross-checked by total energy."""
    energies = np.stack(stable_energies)
    best_per_member = energies.min(axis=0)
    dominant = [k for k in range(len(stable_idx))
                if np.array_equal(energies[k], best_per_member)]
    if len(dominant) != 1:
        raise RuntimeError("side-optimal stable matching is not unique; "
                           "lattice structure violated")
    totals = energies.sum(axis=1)
    if totals[dominant[0]] != totals.min():
        raise RuntimeError("domination and total-energy selectors disagree")
    return matchings[stable_idx[dominant[0]]]


def reference_gs(prefs: PreferenceSystem, proposing_group: Group = Group.MALE) -> MatchResult:
    """Textbook one-sided deferred acceptance (free-list formulation).

    Kept intentionally separate from the engine for differential testing:
    plain Python lists, proposers drawn from a stack, recipients hold the
    best offer seen so far.
    """
    if proposing_group is Group.MALE:
        proposer_prefs = prefs.male_prefs.tolist()
        recipient_prefs = prefs.female_prefs.tolist()
    else:
        proposer_prefs = prefs.female_prefs.tolist()
        recipient_prefs = prefs.male_prefs.tolist()
    n_prop = len(proposer_prefs)
    n_rec = len(recipient_prefs)

    rec_rank = [[0] * n_prop for _ in range(n_rec)]
    for r, row in enumerate(recipient_prefs):
        for pos, p in enumerate(row):
            rec_rank[r][p] = pos + 1

    held = [-1] * n_rec                # best proposer held by each recipient
    prop_partner = [-1] * n_prop
    cursor = [0] * n_prop
    events = 0
    free = list(range(n_prop - 1, -1, -1))
    while free:
        p = free.pop()
        while cursor[p] < n_rec:
            r = proposer_prefs[p][cursor[p]]
            cursor[p] += 1
            events += 1
            current = held[r]
            if current == -1:
                held[r] = p
                prop_partner[p] = r
                break
            if rec_rank[r][p] < rec_rank[r][current]:
                held[r] = p
                prop_partner[p] = r
                prop_partner[current] = -1
                p = current
        # exhausted proposers simply stay single

    if proposing_group is Group.MALE:
        male_partner = np.array(prop_partner, np.int32)
        female_partner = np.array(held, np.int32)
    else:
        male_partner = np.array(held, np.int32)
        female_partner = np.array(prop_partner, np.int32)

    n, m = prefs.n_males, prefs.n_females
    male_energy = np.array(
        [prefs.male_rank_of[i, male_partner[i]] if male_partner[i] >= 0 else m + 1
         for i in range(n)], np.int32)
    female_energy = np.array(
        [prefs.female_rank_of[j, female_partner[j]] if female_partner[j] >= 0 else n + 1
         for j in range(m)], np.int32)
    return MatchResult(
        male_partner=male_partner,
        female_partner=female_partner,
        male_energy=male_energy,
        female_energy=female_energy,
        mean_male_energy=float(male_energy.mean()),
        mean_female_energy=float(female_energy.mean()),
        single_males=int((male_partner < 0).sum()),
        single_females=int((female_partner < 0).sum()),
        blocking_pairs=count_blocking_pairs(prefs, male_partner, female_partner),
        proposal_events=events,
    )
