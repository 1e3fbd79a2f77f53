"""Render sweep CSVs into multi-panel energy-vs-group-size figures.

Input is the sweep CSV contract (one row per repetition); each panel shows
one (alpha, beta) configuration with the male and female mean-energy curves
and their across-repetition std bands.  Output is pixel-deterministic:
fixed canvas, bundled fonts, no timestamps, salted SVG ids.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

EXPECTED_COLUMNS = [
    "alpha", "beta", "n_males", "n_females", "rep",
    "mean_male_energy", "mean_female_energy",
    "std_male_energy", "std_female_energy",
    "single_males", "single_females", "blocking_pairs",
    "proposal_events", "child_seed",
]

_RC = {
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.titlesize": 10,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "svg.hashsalt": "smpsim-figures",
}

MALE_COLOR = "#1f77b4"
FEMALE_COLOR = "#d62728"
COMPARE_MALE_COLOR = "#17becf"
COMPARE_FEMALE_COLOR = "#ff7f0e"


class FigureInputError(ValueError):
    """Bad or unusable figure input (missing columns, empty data, bad panel)."""


@dataclass(frozen=True)
class SeriesPoint:
    n_females: int
    male_mean: float
    male_std: float
    female_mean: float
    female_std: float


@dataclass
class SweepTable:
    """Aggregated curves per (alpha, beta), x values in CSV appearance order."""

    source: str
    configs: list = field(default_factory=list)  # [(alpha, beta), ...]
    series: dict = field(default_factory=dict)   # (alpha, beta) -> [SeriesPoint]


@dataclass
class FigureSpec:
    inputs: list
    out: Path
    layout: tuple = (2, 2)
    formats: tuple = ("png", "svg")
    panels: list = None            # [(alpha, beta), ...]; default: discovered
    compare: Path = None
    compare_config: tuple = None   # (alpha, beta) from the compare file


def load_table(path) -> SweepTable:
    """Read one sweep CSV and aggregate mean/std per (alpha, beta, n_females)."""
    path = Path(path)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        names = reader.fieldnames or []
        for column in EXPECTED_COLUMNS:
            if column not in names:
                raise FigureInputError(f"{path}: missing column {column!r}")
        rows = list(reader)
    if not rows:
        raise FigureInputError(f"{path}: no data rows")

    configs = []
    x_order = defaultdict(list)             # config -> [n_females...]
    males = defaultdict(list)               # (config, m) -> [values]
    females = defaultdict(list)
    for rec in rows:
        try:
            config = (float(rec["alpha"]), float(rec["beta"]))
            m = int(rec["n_females"])
            male = float(rec["mean_male_energy"])
            female = float(rec["mean_female_energy"])
        except (TypeError, ValueError) as exc:
            raise FigureInputError(f"{path}: malformed row {rec}: {exc}") from exc
        if config not in x_order:
            configs.append(config)
        if m not in x_order[config]:
            x_order[config].append(m)
        males[(config, m)].append(male)
        females[(config, m)].append(female)

    table = SweepTable(source=str(path), configs=configs)
    for config in configs:
        points = []
        for m in x_order[config]:
            mm = np.asarray(males[(config, m)])
            ff = np.asarray(females[(config, m)])
            points.append(SeriesPoint(
                n_females=m,
                male_mean=float(mm.mean()),
                male_std=float(mm.std(ddof=1)) if mm.size > 1 else 0.0,
                female_mean=float(ff.mean()),
                female_std=float(ff.std(ddof=1)) if ff.size > 1 else 0.0,
            ))
        table.series[config] = points
    return table


def parse_layout(text: str) -> tuple:
    try:
        rows, _, cols = text.lower().partition("x")
        layout = (int(rows), int(cols))
    except ValueError as exc:
        raise FigureInputError(f"bad layout {text!r}; expected ROWSxCOLS") from exc
    if layout[0] < 1 or layout[1] < 1:
        raise FigureInputError(f"bad layout {text!r}; sides must be >= 1")
    return layout


def _draw_series(ax, points, male_color, female_color, style, label_suffix=""):
    x = np.array([p.n_females for p in points])
    for attr, color, label in (("male", male_color, "male"),
                               ("female", female_color, "female")):
        mean = np.array([getattr(p, f"{attr}_mean") for p in points])
        std = np.array([getattr(p, f"{attr}_std") for p in points])
        ax.plot(x, mean, style, color=color, linewidth=1.4,
                label=f"{label} mean energy{label_suffix}")
        ax.fill_between(x, mean - std, mean + std, color=color, alpha=0.18,
                        linewidth=0)


def render_figure(spec: FigureSpec) -> list:
    """Render one multi-panel figure; returns the written file paths."""
    tables = [load_table(p) for p in spec.inputs]
    merged = SweepTable(source="+".join(t.source for t in tables))
    for t in tables:
        for config in t.configs:
            if config not in merged.series:
                merged.configs.append(config)
                merged.series[config] = t.series[config]

    panels = spec.panels if spec.panels is not None else list(merged.configs)
    if not panels:
        raise FigureInputError("no panels to draw")
    for config in panels:
        if config not in merged.series:
            raise FigureInputError(
                f"configuration (alpha={config[0]:g}, beta={config[1]:g}) "
                f"not present in {merged.source}")

    n_rows, n_cols = spec.layout
    if len(panels) > n_rows * n_cols:
        raise FigureInputError(
            f"{len(panels)} panels do not fit layout {n_rows}x{n_cols}")

    compare_points = None
    compare_label = ""
    if spec.compare is not None:
        compare_table = load_table(spec.compare)
        config = spec.compare_config
        if config is None:
            if len(compare_table.configs) == 1:
                config = compare_table.configs[0]
            else:
                raise FigureInputError(
                    f"{spec.compare}: several configurations present; "
                    "pick one with --compare-config ALPHA:BETA")
        if config not in compare_table.series:
            raise FigureInputError(
                f"configuration (alpha={config[0]:g}, beta={config[1]:g}) "
                f"not present in {spec.compare}")
        compare_points = compare_table.series[config]
        compare_label = f" (compare α={config[0]:g}, β={config[1]:g})"

    with plt.rc_context(_RC):
        fig, axes = plt.subplots(n_rows, n_cols,
                                 figsize=(4.2 * n_cols, 3.2 * n_rows),
                                 squeeze=False)
        flat = [ax for row in axes for ax in row]
        for ax, config in zip(flat, panels):
            _draw_series(ax, merged.series[config], MALE_COLOR, FEMALE_COLOR, "-")
            if compare_points is not None:
                _draw_series(ax, compare_points, COMPARE_MALE_COLOR,
                             COMPARE_FEMALE_COLOR, "--", compare_label)
            ax.set_title(f"α = {config[0]:g}, β = {config[1]:g}")
            ax.set_xlabel("Size of Female group (M)")
            ax.set_ylabel("Mean energy")
            ax.legend(loc="upper left")
        for ax in flat[len(panels):]:
            ax.set_axis_off()
        fig.tight_layout()

        written = []
        out = Path(spec.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        for fmt in spec.formats:
            target = out if out.suffix == f".{fmt}" else out.with_suffix(f".{fmt}")
            metadata = {"Date": None} if fmt == "svg" else None
            fig.savefig(target, format=fmt, metadata=metadata)
            written.append(target)
        plt.close(fig)
    return written
