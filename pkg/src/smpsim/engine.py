"""Generalized deferred acceptance driven by a FIFO queue of active singles.

Members of both groups can be proposers.  The queue holds exactly the single
active members that still have untried candidates; one dequeue means one
proposal.  A recipient (active or passive, matched or single) accepts iff the
proposer ranks strictly better than its current energy, where a single's
energy is the opposite group size plus one, so a single recipient always
accepts.  Cursors only move forward: an ordered (proposer, recipient) pair is
tried at most once per run, which bounds proposal events by 2*N*M and
guarantees termination with the strong condition (every active member that
ends single has been rejected by the entire opposite group).

``step`` is the readable reference implementation; ``run_matching`` defaults
to a compiled drain loop with identical semantics (property-tested to be
bit-identical).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .core import ActivationFlags, Group, PreferenceSystem, SimConfig, draw_activation, generate_preferences
from .rng import Rng


@dataclass(frozen=True)
class MemberRef:
    """One member of either group."""

    group: Group
    index: int


@dataclass
class MatchState:
    """Evolving engine state.

    Queue entries are member ids: male m is ``m``, female f is
    ``n_males + f``.  ``in_queue`` mirrors queue membership for O(1) tests.
    """

    male_partner: np.ndarray
    female_partner: np.ndarray
    male_cursor: np.ndarray
    female_cursor: np.ndarray
    queue: deque = field(default_factory=deque)
    in_queue: np.ndarray = None
    proposal_events: int = 0

    @property
    def n_males(self) -> int:
        return self.male_partner.shape[0]

    @property
    def n_females(self) -> int:
        return self.female_partner.shape[0]

    def queue_refs(self) -> list[MemberRef]:
        n = self.n_males
        return [MemberRef(Group.MALE, x) if x < n else MemberRef(Group.FEMALE, x - n)
                for x in self.queue]


@dataclass(frozen=True)
class StepEvent:
    """Outcome of a single proposal."""

    proposer: MemberRef
    recipient: MemberRef
    accepted: bool
    dumped: Optional[MemberRef] = None


@dataclass
class MatchResult:
    """Final matching with per-member energies and summary counts."""

    male_partner: np.ndarray
    female_partner: np.ndarray
    male_energy: np.ndarray
    female_energy: np.ndarray
    mean_male_energy: float
    mean_female_energy: float
    single_males: int
    single_females: int
    blocking_pairs: int
    proposal_events: int

    def matched_pairs(self) -> int:
        return self.male_partner.shape[0] - self.single_males


def init_state(config: SimConfig, prefs: PreferenceSystem, flags: ActivationFlags,
               rng: Rng, queue_order: Optional[Sequence[int]] = None) -> MatchState:
    """Empty matching with the active members queued in seed-shuffled order.

    The queue starts as one Fisher-Yates shuffle of the concatenated active
    list (males in index order, then females).  ``queue_order`` overrides the
    shuffle with an explicit member-id sequence; it exists for
    order-independence and mirror tests and skips the rng draw entirely.
    """
    n, m = config.n_males, config.n_females
    if prefs.n_males != n or prefs.n_females != m:
        raise ValueError("preference system does not match config sizes")
    if flags.male_active.shape[0] != n or flags.female_active.shape[0] != m:
        raise ValueError("activation flags do not match config sizes")

    if queue_order is None:
        members = np.concatenate([
            np.flatnonzero(flags.male_active),
            np.flatnonzero(flags.female_active) + n,
        ]).astype(np.int64)
        rng.state = int(_kernels.shuffle_i64(members, np.uint64(rng.state)))
    else:
        members = np.asarray(list(queue_order), dtype=np.int64)

    state = MatchState(
        male_partner=np.full(n, -1, np.int32),
        female_partner=np.full(m, -1, np.int32),
        male_cursor=np.zeros(n, np.int32),
        female_cursor=np.zeros(m, np.int32),
        queue=deque(int(x) for x in members),
        in_queue=np.zeros(n + m, np.bool_),
        proposal_events=0,
    )
    state.in_queue[members] = True
    return state


def step(state: MatchState, prefs: PreferenceSystem, flags: ActivationFlags) -> StepEvent:
    """Process the front of the queue: one proposal, acceptance or rejection."""
    if not state.queue:
        raise RuntimeError("step() called with an empty queue")
    n, m = state.n_males, state.n_females
    p = state.queue.popleft()
    state.in_queue[p] = False

    if p < n:
        c = int(prefs.male_prefs[p, state.male_cursor[p]])
        state.male_cursor[p] += 1
        state.proposal_events += 1
        cur = int(state.female_partner[c])
        cur_energy = int(prefs.female_rank_of[c, cur]) if cur >= 0 else n + 1
        accepted = int(prefs.female_rank_of[c, p]) < cur_energy
        dumped = None
        if accepted:
            if state.in_queue[n + c]:
                state.queue.remove(n + c)
                state.in_queue[n + c] = False
            if cur >= 0:
                state.male_partner[cur] = -1
                dumped = MemberRef(Group.MALE, cur)
                if flags.male_active[cur] and state.male_cursor[cur] < m:
                    state.queue.append(cur)
                    state.in_queue[cur] = True
            state.female_partner[c] = p
            state.male_partner[p] = c
        else:
            if state.male_cursor[p] < m:
                state.queue.append(p)
                state.in_queue[p] = True
        return StepEvent(MemberRef(Group.MALE, p), MemberRef(Group.FEMALE, c),
                         bool(accepted), dumped)

    f = p - n
    c = int(prefs.female_prefs[f, state.female_cursor[f]])
    state.female_cursor[f] += 1
    state.proposal_events += 1
    cur = int(state.male_partner[c])
    cur_energy = int(prefs.male_rank_of[c, cur]) if cur >= 0 else m + 1
    accepted = int(prefs.male_rank_of[c, f]) < cur_energy
    dumped = None
    if accepted:
        if state.in_queue[c]:
            state.queue.remove(c)
            state.in_queue[c] = False
        if cur >= 0:
            state.female_partner[cur] = -1
            dumped = MemberRef(Group.FEMALE, cur)
            if flags.female_active[cur] and state.female_cursor[cur] < n:
                state.queue.append(n + cur)
                state.in_queue[n + cur] = True
        state.male_partner[c] = f
        state.female_partner[f] = c
    else:
        if state.female_cursor[f] < n:
            state.queue.append(p)
            state.in_queue[p] = True
    return StepEvent(MemberRef(Group.FEMALE, f), MemberRef(Group.MALE, c),
                     bool(accepted), dumped)


def energies_from_partners(prefs: PreferenceSystem, male_partner: np.ndarray,
                           female_partner: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-member 1-based partner ranks; singles score opposite size + 1."""
    n, m = prefs.n_males, prefs.n_females
    male_energy = np.where(
        male_partner >= 0,
        prefs.male_rank_of[np.arange(n), np.maximum(male_partner, 0)],
        m + 1,
    ).astype(np.int32)
    female_energy = np.where(
        female_partner >= 0,
        prefs.female_rank_of[np.arange(m), np.maximum(female_partner, 0)],
        n + 1,
    ).astype(np.int32)
    return male_energy, female_energy


def count_blocking_pairs(prefs: PreferenceSystem, male_partner: np.ndarray,
                         female_partner: np.ndarray) -> int:
    """Number of (m, f) pairs that both strictly prefer each other to their lot."""
    male_energy, female_energy = energies_from_partners(prefs, male_partner, female_partner)
    return int(_kernels.count_blocking(prefs.male_rank_of, prefs.female_rank_of,
                                       male_energy, female_energy))


def result_from_state(state: MatchState, prefs: PreferenceSystem) -> MatchResult:
    """Summarize a drained state into a MatchResult."""
    male_energy, female_energy = energies_from_partners(
        prefs, state.male_partner, state.female_partner)
    blocking = int(_kernels.count_blocking(prefs.male_rank_of, prefs.female_rank_of,
                                           male_energy, female_energy))
    return MatchResult(
        male_partner=state.male_partner,
        female_partner=state.female_partner,
        male_energy=male_energy,
        female_energy=female_energy,
        mean_male_energy=float(male_energy.mean()),
        mean_female_energy=float(female_energy.mean()),
        single_males=int((state.male_partner < 0).sum()),
        single_females=int((state.female_partner < 0).sum()),
        blocking_pairs=blocking,
        proposal_events=int(state.proposal_events),
    )


def run_matching(config: SimConfig, prefs: PreferenceSystem, flags: ActivationFlags,
                 rng: Rng, queue_order: Optional[Sequence[int]] = None,
                 compiled: bool = True) -> MatchResult:
    """Drain the queue to the strong condition and summarize.

    ``compiled=False`` iterates the pure-Python ``step`` instead of the
    compiled loop; both paths are bit-identical.
    """
    state = init_state(config, prefs, flags, rng, queue_order=queue_order)
    if compiled:
        queue_init = np.fromiter(state.queue, np.int64, len(state.queue))
        state.proposal_events = int(_kernels.drain(
            prefs.male_prefs, prefs.female_prefs,
            prefs.male_rank_of, prefs.female_rank_of,
            flags.male_active, flags.female_active,
            state.male_partner, state.female_partner,
            state.male_cursor, state.female_cursor,
            queue_init, state.proposal_events,
        ))
        state.queue.clear()
        state.in_queue[:] = False
    else:
        while state.queue:
            step(state, prefs, flags)
    return result_from_state(state, prefs)


def simulate(config: SimConfig) -> MatchResult:
    """One full instance from a config: preferences, activation, matching."""
    rng = Rng(config.seed)
    prefs = generate_preferences(config.n_males, config.n_females, rng)
    flags = draw_activation(config, rng)
    return run_matching(config, prefs, flags, rng)
