"""Deterministic stable-marriage simulator with heterogeneous active proposers.

Groups of unequal size carry configurable fractions of active members
(who send proposals) on each side; the engine runs generalized deferred
acceptance until every active single has been rejected by the whole
opposite group.  Everything is reproducible from a single 64-bit seed.
"""

from .core import (ActivationFlags, ActivationMode, Group, PreferenceSystem,
                   SimConfig, assign_active, draw_activation, generate_preferences)
from .engine import (MatchResult, MatchState, MemberRef, StepEvent,
                     count_blocking_pairs, energies_from_partners, init_state,
                     result_from_state, run_matching, simulate, step)
from .experiment import (AggregatePoint, SweepRow, SweepSpec, aggregate,
                         default_m_grid, preset_spec, read_csv, run_repetition,
                         run_sweep, write_csv)
from .oracle import MatchingSet, OracleSizeError, enumerate_stable, reference_gs
from .rng import Rng, derive_child_seed

__version__ = "0.1.0"

__all__ = [
    "ActivationFlags", "ActivationMode", "AggregatePoint", "Group",
    "MatchResult", "MatchState", "MatchingSet", "MemberRef", "OracleSizeError",
    "PreferenceSystem", "Rng", "SimConfig", "StepEvent", "SweepRow", "SweepSpec",
    "aggregate", "assign_active", "count_blocking_pairs", "default_m_grid",
    "derive_child_seed", "draw_activation", "energies_from_partners",
    "enumerate_stable", "generate_preferences", "init_state", "preset_spec",
    "read_csv", "reference_gs", "result_from_state", "run_matching",
    "run_repetition", "run_sweep", "simulate", "step", "write_csv",
]
