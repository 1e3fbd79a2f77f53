"""Monte Carlo sweep harness: grids over female group size and (alpha, beta).

Each (config, size, repetition) triple gets its own child seed derived from
the master seed and the triple's linear index, so any row can be reproduced
in isolation and rows never depend on execution order or worker count.
"""

from __future__ import annotations

import concurrent.futures
import csv
import math
import statistics
from dataclasses import dataclass, field
from typing import Iterable, Optional


from .core import ActivationMode, SimConfig, draw_activation, generate_preferences
from .engine import run_matching
from .rng import Rng, derive_child_seed

CSV_HEADER = ("alpha,beta,n_males,n_females,rep,mean_male_energy,mean_female_energy,"
              "std_male_energy,std_female_energy,single_males,single_females,"
              "blocking_pairs,proposal_events,child_seed")

DEFAULT_N_MALES = 1000
DEFAULT_REPETITIONS = 50

# Preset (alpha, beta) grids for the four standard experiments.
EXTREMES_CONFIGS = [(1.0, 1.0), (1.0, 0.0), (0.0, 1.0), (0.5, 0.5)]
CASE1_CONFIGS = [(a, 1.0) for a in (0.1, 0.4, 0.6, 0.9)]
CASE2_CONFIGS = [(a, round(1.0 - a, 10)) for a in (0.1, 0.4, 0.6, 0.9)]
CASE3_CONFIGS = [(1.0, b) for b in (0.1, 0.4, 0.6, 0.9)]
PRESETS = {
    "extremes": EXTREMES_CONFIGS,
    "case1": CASE1_CONFIGS,
    "case2": CASE2_CONFIGS,
    "case3": CASE3_CONFIGS,
}


def default_m_grid(n_males: int) -> list[int]:
    """Female sizes 0.1*N .. 2.0*N in steps of 0.1*N, rounded, floored at 1."""
    values = []
    for k in range(1, 21):
        v = max(1, round(0.1 * k * n_males))
        if not values or v > values[-1]:
            values.append(v)
    return values


@dataclass
class SweepSpec:
    """Grid definition for one sweep."""

    n_males: int = DEFAULT_N_MALES
    m_values: list = None
    configs: list = field(default_factory=lambda: [(0.0, 1.0)])
    repetitions: int = DEFAULT_REPETITIONS
    master_seed: int = 0
    activation_mode: ActivationMode = ActivationMode.BERNOULLI

    def __post_init__(self) -> None:
        if self.m_values is None:
            self.m_values = default_m_grid(self.n_males)
        self.m_values = [int(v) for v in self.m_values]
        if self.n_males < 1:
            raise ValueError(f"n_males must be >= 1, got {self.n_males}")
        if self.repetitions < 1:
            raise ValueError(f"repetitions must be >= 1, got {self.repetitions}")
        if not self.m_values:
            raise ValueError("m_values must be non-empty")
        if any(v < 1 for v in self.m_values):
            raise ValueError("all m_values must be >= 1")
        if any(b <= a for a, b in zip(self.m_values, self.m_values[1:])):
            raise ValueError("m_values must be strictly increasing")
        if not self.configs:
            raise ValueError("configs must be non-empty")
        for a, b in self.configs:
            if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
                raise ValueError(f"invalid (alpha, beta) pair ({a}, {b})")

    def triple_index(self, config_idx: int, m_idx: int, rep_idx: int) -> int:
        """Collision-free linear index of one (config, size, repetition) triple."""
        return ((config_idx * len(self.m_values)) + m_idx) * self.repetitions + rep_idx

    def total_runs(self) -> int:
        return len(self.configs) * len(self.m_values) * self.repetitions


@dataclass
class SweepRow:
    """One repetition's summary; maps 1:1 onto a CSV line."""

    alpha: float
    beta: float
    n_males: int
    n_females: int
    rep_index: int
    mean_male_energy: float
    mean_female_energy: float
    std_male_energy: float
    std_female_energy: float
    single_males: int
    single_females: int
    blocking_pairs: int
    proposal_events: int
    child_seed: int

    def to_csv_line(self) -> str:
        return (f"{self.alpha:.6f},{self.beta:.6f},{self.n_males},{self.n_females},"
                f"{self.rep_index},{self.mean_male_energy:.6f},{self.mean_female_energy:.6f},"
                f"{self.std_male_energy:.6f},{self.std_female_energy:.6f},"
                f"{self.single_males},{self.single_females},{self.blocking_pairs},"
                f"{self.proposal_events},{self.child_seed}")


def run_repetition(n_males: int, n_females: int, alpha: float, beta: float,
                   child_seed: int, rep_index: int,
                   activation_mode: ActivationMode = ActivationMode.BERNOULLI) -> SweepRow:
    """One fresh instance (preferences, activation, queue shuffle) from a child seed."""
    config = SimConfig(n_males=n_males, n_females=n_females, alpha=alpha, beta=beta,
                       seed=child_seed, activation_mode=activation_mode)
    rng = Rng(child_seed)
    prefs = generate_preferences(n_males, n_females, rng)
    flags = draw_activation(config, rng)
    result = run_matching(config, prefs, flags, rng)
    return SweepRow(
        alpha=alpha,
        beta=beta,
        n_males=n_males,
        n_females=n_females,
        rep_index=rep_index,
        mean_male_energy=result.mean_male_energy,
        mean_female_energy=result.mean_female_energy,
        std_male_energy=float(result.male_energy.std()),
        std_female_energy=float(result.female_energy.std()),
        single_males=result.single_males,
        single_females=result.single_females,
        blocking_pairs=result.blocking_pairs,
        proposal_events=result.proposal_events,
        child_seed=child_seed,
    )


def _run_point(spec: SweepSpec, config_idx: int, m_idx: int) -> list:
    """All repetitions of one (config, size) grid point, in rep order."""
    alpha, beta = spec.configs[config_idx]
    n_females = spec.m_values[m_idx]
    rows = []
    for rep in range(spec.repetitions):
        child = derive_child_seed(spec.master_seed,
                                  spec.triple_index(config_idx, m_idx, rep))
        rows.append(run_repetition(spec.n_males, n_females, alpha, beta, child, rep,
                                   spec.activation_mode))
    return rows


def run_sweep(spec: SweepSpec, workers: int = 1) -> list:
    """Execute the whole grid; row order is configs x m_values x reps.

    Worker processes only change wall time, never content or order: results
    are buffered and emitted in canonical order.
    """
    points = [(ci, mi) for ci in range(len(spec.configs)) for mi in range(len(spec.m_values))]
    if workers <= 1 or len(points) == 1:
        buckets = [_run_point(spec, ci, mi) for ci, mi in points]
    else:
        from . import _kernels
        _kernels.warmup()  # populate the on-disk JIT cache before forking
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_point, spec, ci, mi) for ci, mi in points]
            buckets = [f.result() for f in futures]
    return [row for bucket in buckets for row in bucket]


@dataclass
class AggregatePoint:
    """Across-repetition summary of one (alpha, beta, n_females) grid point."""

    alpha: float
    beta: float
    n_females: int
    repetitions: int
    mean_male_energy: float
    mean_female_energy: float
    std_male_energy: float
    std_female_energy: float
    mean_single_males: float
    mean_single_females: float
    mean_blocking_pairs: float

    @property
    def sem_male_energy(self) -> float:
        return self.std_male_energy / math.sqrt(self.repetitions)

    @property
    def sem_female_energy(self) -> float:
        return self.std_female_energy / math.sqrt(self.repetitions)


def aggregate(rows: Iterable[SweepRow]) -> list:
    """Group rows by (alpha, beta, n_females); mean/std across repetitions.

    Stds are sample standard deviations (ddof=1) of the per-repetition mean
    energies; single-repetition groups report std 0.
    """
    groups: dict = {}
    order = []
    for row in rows:
        key = (round(row.alpha, 10), round(row.beta, 10), row.n_females)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(row)
    out = []
    for key in order:
        bucket = groups[key]
        males = [r.mean_male_energy for r in bucket]
        females = [r.mean_female_energy for r in bucket]
        out.append(AggregatePoint(
            alpha=key[0],
            beta=key[1],
            n_females=key[2],
            repetitions=len(bucket),
            mean_male_energy=statistics.fmean(males),
            mean_female_energy=statistics.fmean(females),
            std_male_energy=statistics.stdev(males) if len(males) > 1 else 0.0,
            std_female_energy=statistics.stdev(females) if len(females) > 1 else 0.0,
            mean_single_males=statistics.fmean(r.single_males for r in bucket),
            mean_single_females=statistics.fmean(r.single_females for r in bucket),
            mean_blocking_pairs=statistics.fmean(r.blocking_pairs for r in bucket),
        ))
    return out


def write_csv(rows: Iterable[SweepRow], path) -> int:
    """Write the canonical CSV (exact header, 6-decimal floats); returns row count."""
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in rows:
            fh.write(row.to_csv_line() + "\n")
            count += 1
    return count


def read_csv(path) -> list:
    """Read a sweep CSV written by write_csv back into SweepRow objects."""
    rows = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        expected = CSV_HEADER.split(",")
        if reader.fieldnames != expected:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        for rec in reader:
            rows.append(SweepRow(
                alpha=float(rec["alpha"]),
                beta=float(rec["beta"]),
                n_males=int(rec["n_males"]),
                n_females=int(rec["n_females"]),
                rep_index=int(rec["rep"]),
                mean_male_energy=float(rec["mean_male_energy"]),
                mean_female_energy=float(rec["mean_female_energy"]),
                std_male_energy=float(rec["std_male_energy"]),
                std_female_energy=float(rec["std_female_energy"]),
                single_males=int(rec["single_males"]),
                single_females=int(rec["single_females"]),
                blocking_pairs=int(rec["blocking_pairs"]),
                proposal_events=int(rec["proposal_events"]),
                child_seed=int(rec["child_seed"]),
            ))
    return rows


def preset_spec(name: str, n_males: int = DEFAULT_N_MALES,
                repetitions: int = DEFAULT_REPETITIONS, master_seed: int = 0,
                activation_mode: ActivationMode = ActivationMode.BERNOULLI,
                m_values: Optional[list] = None) -> SweepSpec:
    """SweepSpec for one of the named preset experiments."""
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return SweepSpec(
        n_males=n_males,
        m_values=list(m_values) if m_values is not None else None,
        configs=list(PRESETS[name]),
        repetitions=repetitions,
        master_seed=master_seed,
        activation_mode=activation_mode,
    )
