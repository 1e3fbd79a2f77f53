"""SplitMix64 pseudo-randomness with reproducible substreams.

Every random draw in the simulator flows through :class:`Rng`, so a single
64-bit seed pins an entire experiment bit-for-bit, on any platform.  The
compiled kernels in :mod:`smpsim._kernels` advance the identical recurrence;
the two implementations are cross-checked in the test suite.
"""

from __future__ import annotations

from typing import MutableSequence

_MASK = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class Rng:
    """SplitMix64 generator: 64-bit state, one mixed output per step."""

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK

    def next_u64(self) -> int:
        """Advance the state and return the next 64-bit output."""
        self.state = (self.state + GOLDEN_GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def next_below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection sampling.

        Draws are rejected below the threshold ``2**64 mod n`` so the
        accepted range has size divisible by ``n``.  ``n == 1`` returns 0
        without consuming a draw.
        """
        if n <= 0:
            raise ValueError(f"range must be positive, got {n}")
        if n == 1:
            return 0
        threshold = ((1 << 64) - n) % n
        while True:
            v = self.next_u64()
            if v >= threshold:
                return v % n

    def shuffle(self, seq: MutableSequence) -> None:
        """In-place Fisher-Yates shuffle, iterating from the high index down."""
        for i in range(len(seq) - 1, 0, -1):
            j = self.next_below(i + 1)
            seq[i], seq[j] = seq[j], seq[i]

    def clone(self) -> "Rng":
        return Rng(self.state)

    def __repr__(self) -> str:  # pragma: no cover
        return f"Rng(state=0x{self.state:016x})"


def derive_child_seed(master_seed: int, rep_index: int) -> int:
    """Decorrelated child seed for repetition ``rep_index``.

    The child generator is seeded with ``master XOR (rep_index * golden)``
    and stepped once, so each repetition gets an independent-looking stream
    that depends only on (master, index), never on sweep execution order.
    """
    if rep_index < 0:
        raise ValueError(f"rep_index must be non-negative, got {rep_index}")
    mixed = (master_seed ^ (rep_index * GOLDEN_GAMMA)) & _MASK
    return Rng(mixed).next_u64()
