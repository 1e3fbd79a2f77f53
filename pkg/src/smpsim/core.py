"""Domain types, preference generation, and activation sampling.

A simulation instance is fully determined by a :class:`SimConfig`: the seed
drives preference rows (all male rows in index order, then all female rows),
then activation flags (males, then females), then the engine's initial queue
shuffle.  Keeping the draw order fixed is what makes a seed reproduce an
instance bit-for-bit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .rng import Rng


class ActivationMode(enum.Enum):
    """How the active fraction of a group is realized."""

    BERNOULLI = "bernoulli"
    EXACT_COUNT = "exact_count"


class Group(enum.Enum):
    MALE = "male"
    FEMALE = "female"


@dataclass(frozen=True)
class SimConfig:
    """Parameters of one simulation instance.

    alpha is the active fraction of females, beta the active fraction of
    males; active members send proposals, passive members only receive.
    """

    n_males: int
    n_females: int
    alpha: float
    beta: float
    seed: int
    activation_mode: ActivationMode = ActivationMode.BERNOULLI

    def __post_init__(self) -> None:
        if self.n_males < 1:
            raise ValueError(f"n_males must be >= 1, got {self.n_males}")
        if self.n_females < 1:
            raise ValueError(f"n_females must be >= 1, got {self.n_females}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must be in [0, 1], got {self.beta}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass
class PreferenceSystem:
    """Both groups' complete ordinal rankings plus rank-lookup inverses.

    ``male_prefs[m]`` lists female indices from most to least preferred;
    ``male_rank_of[m][f]`` is the 1-based rank male m gives female f
    (so ``male_prefs[m][male_rank_of[m][f] - 1] == f``).  Symmetrically
    for females.
    """

    male_prefs: np.ndarray
    female_prefs: np.ndarray
    male_rank_of: np.ndarray
    female_rank_of: np.ndarray

    @property
    def n_males(self) -> int:
        return self.male_prefs.shape[0]

    @property
    def n_females(self) -> int:
        return self.female_prefs.shape[0]

    def transposed(self) -> "PreferenceSystem":
        """Group-swapped view: males become females and vice versa."""
        return PreferenceSystem(
            male_prefs=self.female_prefs,
            female_prefs=self.male_prefs,
            male_rank_of=self.female_rank_of,
            female_rank_of=self.male_rank_of,
        )


@dataclass
class ActivationFlags:
    """Per-member proposer flags for both groups."""

    male_active: np.ndarray
    female_active: np.ndarray

    def swapped(self) -> "ActivationFlags":
        return ActivationFlags(male_active=self.female_active,
                               female_active=self.male_active)


def generate_preferences(n_males: int, n_females: int, rng: Rng) -> PreferenceSystem:
    """Draw independent uniform preference rows for every member.

    Generation order is fixed: all male rows in index order, then all
    female rows, so the rng stream position after this call depends only
    on the group sizes.
    """
    if n_males < 1 or n_females < 1:
        raise ValueError("both groups must have at least one member")
    male_prefs = np.empty((n_males, n_females), np.int32)
    female_prefs = np.empty((n_females, n_males), np.int32)
    state = _kernels.fill_pref_rows(male_prefs, np.uint64(rng.state))
    state = _kernels.fill_pref_rows(female_prefs, np.uint64(state))
    rng.state = int(state)
    return PreferenceSystem(
        male_prefs=male_prefs,
        female_prefs=female_prefs,
        male_rank_of=_kernels.invert_prefs(male_prefs),
        female_rank_of=_kernels.invert_prefs(female_prefs),
    )


def assign_active(group_size: int, p: float, mode: ActivationMode, rng: Rng) -> np.ndarray:
    """Boolean activity flags for one group.

    bernoulli: each member independently active with probability p (one
    draw per member, always consumed).  exact_count: exactly
    round-half-up(p * group_size) members, chosen uniformly by a partial
    Fisher-Yates of the index list (one draw per selected slot).
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    if group_size < 1:
        raise ValueError(f"group_size must be >= 1, got {group_size}")
    state = np.uint64(rng.state)
    if mode is ActivationMode.BERNOULLI:
        flags, state = _kernels.bernoulli_flags(group_size, p, state)
    else:
        k = int(np.floor(p * group_size + 0.5))
        flags, state = _kernels.exact_count_flags(group_size, k, state)
    rng.state = int(state)
    return flags


def draw_activation(config: SimConfig, rng: Rng) -> ActivationFlags:
    """Activation flags for a whole instance: males (beta) first, then females (alpha)."""
    male = assign_active(config.n_males, config.beta, config.activation_mode, rng)
    female = assign_active(config.n_females, config.alpha, config.activation_mode, rng)
    return ActivationFlags(male_active=male, female_active=female)
