"""Command-line front end: single runs, sweeps, preset grids, verification.

Option resolution order is flags > config file > environment (seed only) >
built-in defaults.  The config file is flat ``key = value`` text whose keys
equal the long flag names without the leading dashes.  Exit codes: 0 success,
1 runtime or assertion failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

from .core import ActivationMode, SimConfig, draw_activation, generate_preferences
from .engine import run_matching, simulate
from .experiment import PRESETS, SweepSpec, preset_spec, run_sweep, write_csv
from .oracle import MAX_ENUMERATION_SIZE, OracleSizeError, enumerate_stable
from .rng import Rng, derive_child_seed

DEFAULT_SEED = 42
SEED_ENV_VAR = "HISMP_SEED"

_ACTIVATION_NAMES = {"bernoulli": ActivationMode.BERNOULLI,
                     "exact": ActivationMode.EXACT_COUNT,
                     "exact_count": ActivationMode.EXACT_COUNT}


def _parse_seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise ValueError("seed out of 64-bit range")
    return value


def _parse_m_values(text: str) -> list:
    return [int(v) for v in text.replace(";", ",").split(",") if v.strip()]


def _parse_pairs(text: str) -> list:
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        a, _, b = chunk.partition(":")
        pairs.append((float(a), float(b)))
    return pairs


def _read_config_file(path: str, parser: argparse.ArgumentParser) -> dict:
    values = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        parser.error(f"cannot read config file {path}: {exc}")
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            parser.error(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        values[key.strip()] = value.strip()
    return values


class _Resolver:
    """Layer CLI flags over config-file values with per-key casting."""

    def __init__(self, parser, args, casts):
        self.parser = parser
        self.args = args
        self.casts = casts
        self.file_values = {}
        if getattr(args, "config", None):
            file_values = _read_config_file(args.config, parser)
            for key, value in file_values.items():
                if key in casts:
                    self.file_values[key] = value
                else:
                    print(f"warning: ignoring unknown config key {key!r}", file=sys.stderr)

    def get(self, key: str, default=None):
        attr = key.replace("-", "_")
        cli_value = getattr(self.args, attr, None)
        if cli_value is not None:
            return cli_value
        if key in self.file_values:
            try:
                return self.casts[key](self.file_values[key])
            except ValueError as exc:
                self.parser.error(f"config key {key!r}: {exc}")
        return default

    def seed(self) -> int:
        value = self.get("seed")
        if value is not None:
            return value
        env = os.environ.get(SEED_ENV_VAR)
        if env is not None:
            try:
                return _parse_seed(env)
            except ValueError as exc:
                self.parser.error(f"invalid {SEED_ENV_VAR}: {exc}")
        return DEFAULT_SEED

    def probability(self, key: str, default: float) -> float:
        value = self.get(key, default)
        if not 0.0 <= value <= 1.0:
            self.parser.error(f"--{key} must be in [0, 1], got {value}")
        return value

    def positive(self, key: str, default: int) -> int:
        value = self.get(key, default)
        if value < 1:
            self.parser.error(f"--{key} must be >= 1, got {value}")
        return value


def _activation(value) -> ActivationMode:
    if isinstance(value, ActivationMode):
        return value
    name = str(value).lower()
    if name not in _ACTIVATION_NAMES:
        raise ValueError(f"unknown activation mode {value!r}")
    return _ACTIVATION_NAMES[name]


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", metavar="FILE",
                     help="flat 'key = value' config file; flags take precedence")
    sub.add_argument("--seed", type=_parse_seed, default=None, metavar="S",
                     help=f"master seed (default: ${SEED_ENV_VAR} or {DEFAULT_SEED})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smpsim",
        description="Deterministic stable-marriage simulator with configurable "
                    "active-proposer fractions per group.")
    subs = parser.add_subparsers(dest="command", required=True)

    p_run = subs.add_parser("run", help="run one matching and print a report")
    _add_common(p_run)
    p_run.add_argument("--males", type=int, default=None, metavar="N",
                       help="male group size (default 1000)")
    p_run.add_argument("--females", type=int, default=None, metavar="M",
                       help="female group size (default 1000)")
    p_run.add_argument("--alpha", type=float, default=None,
                       help="active fraction of females (default 0)")
    p_run.add_argument("--beta", type=float, default=None,
                       help="active fraction of males (default 1)")
    p_run.add_argument("--activation", choices=sorted(_ACTIVATION_NAMES), default=None,
                       help="activation sampling mode (default bernoulli)")
    p_run.set_defaults(func=cmd_run)

    p_sweep = subs.add_parser("sweep", help="run a sweep grid and write CSV")
    _add_common(p_sweep)
    p_sweep.add_argument("--males", type=int, default=None, metavar="N",
                         help="male group size (default 1000)")
    p_sweep.add_argument("--m-values", type=_parse_m_values, default=None, metavar="M1,M2,...",
                         help="female sizes (default 0.1N..2.0N in steps of 0.1N)")
    p_sweep.add_argument("--alpha", type=float, default=None,
                         help="active fraction of females (default 0)")
    p_sweep.add_argument("--beta", type=float, default=None,
                         help="active fraction of males (default 1)")
    p_sweep.add_argument("--pairs", type=_parse_pairs, default=None, metavar="A:B,A:B,...",
                         help="multiple (alpha, beta) configs; overrides --alpha/--beta")
    p_sweep.add_argument("--reps", type=int, default=None,
                         help="repetitions per grid point (default 50)")
    p_sweep.add_argument("--activation", choices=sorted(_ACTIVATION_NAMES), default=None,
                         help="activation sampling mode (default bernoulli)")
    p_sweep.add_argument("--out", default=None, metavar="FILE",
                         help="output CSV path (default sweep.csv)")
    p_sweep.add_argument("--workers", type=int, default=None,
                         help="parallel worker processes (default: logical CPUs)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_fig = subs.add_parser(
        "paper-figures",
        help="emit the four preset experiment grids (extremes, case1-3) as CSVs")
    _add_common(p_fig)
    p_fig.add_argument("--scale", type=int, default=None, metavar="N",
                       help="male group size for all presets (default 1000)")
    p_fig.add_argument("--reps", type=int, default=None,
                       help="repetitions per grid point (default 50)")
    p_fig.add_argument("--activation", choices=sorted(_ACTIVATION_NAMES), default=None,
                       help="activation sampling mode (default bernoulli)")
    p_fig.add_argument("--out-dir", default=None, metavar="DIR",
                       help="directory for the four CSVs (default .)")
    p_fig.add_argument("--workers", type=int, default=None,
                       help="parallel worker processes (default: logical CPUs)")
    p_fig.set_defaults(func=cmd_paper_figures)

    p_verify = subs.add_parser(
        "verify", help="check the engine against the brute-force oracle")
    _add_common(p_verify)
    p_verify.add_argument("--instances", type=int, default=None,
                          help="random instances per size (default 200)")
    p_verify.add_argument("--max-size", type=int, default=None,
                          help=f"largest square size to test, 2..{MAX_ENUMERATION_SIZE} "
                               "(default 6)")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def cmd_run(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    casts = {"males": int, "females": int, "alpha": float, "beta": float,
             "seed": _parse_seed, "activation": str}
    res = _Resolver(parser, args, casts)
    n_males = res.positive("males", 1000)
    n_females = res.positive("females", 1000)
    alpha = res.probability("alpha", 0.0)
    beta = res.probability("beta", 1.0)
    try:
        mode = _activation(res.get("activation", "bernoulli"))
    except ValueError as exc:
        parser.error(str(exc))
    seed = res.seed()

    config = SimConfig(n_males=n_males, n_females=n_females, alpha=alpha, beta=beta,
                       seed=seed, activation_mode=mode)
    result = simulate(config)
    print(f"males {n_males}  females {n_females}  alpha {alpha:g}  beta {beta:g}  "
          f"seed {seed}  activation {mode.value}")
    print(f"  mean male energy   : {result.mean_male_energy:.6f}")
    print(f"  mean female energy : {result.mean_female_energy:.6f}")
    print(f"  single males       : {result.single_males}")
    print(f"  single females     : {result.single_females}")
    print(f"  blocking pairs     : {result.blocking_pairs}")
    print(f"  proposal events    : {result.proposal_events}")
    return 0


def _default_workers() -> int:
    return os.cpu_count() or 1


def cmd_sweep(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    casts = {"males": int, "m-values": _parse_m_values, "alpha": float, "beta": float,
             "pairs": _parse_pairs, "reps": int, "seed": _parse_seed,
             "activation": str, "out": str, "workers": int}
    res = _Resolver(parser, args, casts)
    n_males = res.positive("males", 1000)
    reps = res.positive("reps", 50)
    pairs = res.get("pairs")
    if pairs is None:
        pairs = [(res.probability("alpha", 0.0), res.probability("beta", 1.0))]
    try:
        mode = _activation(res.get("activation", "bernoulli"))
        spec = SweepSpec(n_males=n_males, m_values=res.get("m-values"),
                         configs=pairs, repetitions=reps, master_seed=res.seed(),
                         activation_mode=mode)
    except ValueError as exc:
        parser.error(str(exc))
    out = Path(res.get("out", "sweep.csv"))
    workers = res.positive("workers", _default_workers())

    rows = run_sweep(spec, workers=workers)
    try:
        count = write_csv(rows, out)
    except OSError as exc:
        print(f"error: cannot write {out}: {exc}", file=sys.stderr)
        return 1
    print(f"{out} ({count} rows)")
    return 0


def cmd_paper_figures(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    casts = {"scale": int, "reps": int, "seed": _parse_seed, "activation": str,
             "out-dir": str, "workers": int}
    res = _Resolver(parser, args, casts)
    scale = res.positive("scale", 1000)
    reps = res.positive("reps", 50)
    try:
        mode = _activation(res.get("activation", "bernoulli"))
    except ValueError as exc:
        parser.error(str(exc))
    out_dir = Path(res.get("out-dir", "."))
    workers = res.positive("workers", _default_workers())
    master = res.seed()

    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create {out_dir}: {exc}", file=sys.stderr)
        return 1

    start = time.perf_counter()
    for preset_idx, name in enumerate(sorted(PRESETS)):
        spec = preset_spec(name, n_males=scale, repetitions=reps,
                           master_seed=derive_child_seed(master, preset_idx),
                           activation_mode=mode)
        rows = run_sweep(spec, workers=workers)
        path = out_dir / f"{name}.csv"
        try:
            count = write_csv(rows, path)
        except OSError as exc:
            print(f"error: cannot write {path}: {exc}", file=sys.stderr)
            return 1
        print(f"{path} ({count} rows)")
    print(f"done in {time.perf_counter() - start:.1f}s")
    return 0


def _verify_instance(size: int, seed: int, shuffles: int = 10) -> list:
    """Run every oracle check on one square instance; returns failure strings."""
    failures = []
    rng = Rng(seed)
    prefs = generate_preferences(size, size, rng)
    config = SimConfig(n_males=size, n_females=size, alpha=0.0, beta=1.0, seed=seed)
    flags = draw_activation(config, rng)

    queue = np.arange(size, dtype=np.int64)
    Rng(derive_child_seed(seed, 1)).shuffle(queue)
    result = run_matching(config, prefs, flags, rng, queue_order=queue.tolist())

    truth = enumerate_stable(prefs)
    if not np.array_equal(result.male_partner, truth.male_optimal):
        failures.append("engine != male-optimal stable matching")
    if result.blocking_pairs != 0:
        failures.append(f"blocking_pairs = {result.blocking_pairs}")

    mirror_config = SimConfig(n_males=size, n_females=size, alpha=1.0, beta=0.0, seed=seed)
    mirror_queue = [size + int(x) for x in queue]
    mirror = run_matching(mirror_config, prefs.transposed(), flags.swapped(),
                          Rng(seed), queue_order=mirror_queue)
    if not (np.array_equal(mirror.male_partner, result.female_partner)
            and np.array_equal(mirror.female_partner, result.male_partner)):
        failures.append("mirror symmetry violated")

    shuffler = Rng(derive_child_seed(seed, 2))
    for _ in range(shuffles):
        order = queue.copy()
        shuffler.shuffle(order)
        again = run_matching(config, prefs, flags, Rng(seed), queue_order=order.tolist())
        if not np.array_equal(again.male_partner, result.male_partner):
            failures.append("order independence violated")
            break
    return failures


def cmd_verify(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    casts = {"instances": int, "max-size": int, "seed": _parse_seed}
    res = _Resolver(parser, args, casts)
    instances = res.positive("instances", 200)
    max_size = res.positive("max-size", 6)
    if max_size > MAX_ENUMERATION_SIZE:
        parser.error(f"--max-size {max_size} refused: enumeration is factorial "
                     f"(limit {MAX_ENUMERATION_SIZE})")
    master = res.seed()

    all_ok = True
    print(f"{'size':>4} {'instances':>9} {'status':>8}")
    for size in range(2, max_size + 1):
        bad = 0
        first_failure = None
        for k in range(instances):
            child = derive_child_seed(master, size * 1_000_000 + k)
            failures = _verify_instance(size, child)
            if failures:
                bad += 1
                if first_failure is None:
                    first_failure = (child, failures)
        status = "ok" if bad == 0 else "FAIL"
        print(f"{size:>4} {instances:>9} {status:>8}")
        if bad:
            all_ok = False
            seed_hex, failures = first_failure
            print(f"     first failing seed: {seed_hex} ({'; '.join(failures)})",
                  file=sys.stderr)
    if not all_ok:
        print("verification FAILED", file=sys.stderr)
        return 1
    print("verification passed")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(parser, args)
    except OracleSizeError as exc:
        parser.error(str(exc))
    except KeyboardInterrupt:  # pragma: no cover
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
