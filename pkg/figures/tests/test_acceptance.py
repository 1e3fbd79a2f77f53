"""Release gate: the four preset CSVs render to 2x2-panel images without
error, and identical input produces identical image bytes."""

import subprocess
import sys

import pytest

from smpsim_figures import FigureSpec, render_figure

PRESETS = ("extremes", "case1", "case2", "case3")


@pytest.fixture(scope="module")
def preset_csvs(tmp_path_factory):
    out_dir = tmp_path_factory.mktemp("presets")
    proc = subprocess.run(
        [sys.executable, "-m", "smpsim", "paper-figures", "--scale", "20",
         "--reps", "3", "--seed", "11", "--out-dir", str(out_dir),
         "--workers", "1"],
        capture_output=True, text=True)
    if proc.returncode != 0:
        pytest.skip("smpsim CLI unavailable; install the simulator package first: "
                    + proc.stderr)
    return {name: out_dir / f"{name}.csv" for name in PRESETS}


def test_all_presets_render_2x2(preset_csvs, tmp_path):
    for name, csv_path in preset_csvs.items():
        assert csv_path.exists()
        written = render_figure(FigureSpec(inputs=[csv_path],
                                           out=tmp_path / f"{name}.png"))
        suffixes = sorted(p.suffix for p in written)
        assert suffixes == [".png", ".svg"]
        for p in written:
            assert p.stat().st_size > 0


def test_identical_input_identical_bytes(preset_csvs, tmp_path):
    for name, csv_path in preset_csvs.items():
        first = render_figure(FigureSpec(inputs=[csv_path],
                                         out=tmp_path / f"{name}_a.png"))
        second = render_figure(FigureSpec(inputs=[csv_path],
                                          out=tmp_path / f"{name}_b.png"))
        for p1, p2 in zip(first, second):
            assert p1.read_bytes() == p2.read_bytes(), f"{name}: {p1.suffix} differs"


def test_compare_overlay_against_baseline(preset_csvs, tmp_path):
    # case1 panels overlaid with the one-sided baseline from the extremes file
    written = render_figure(FigureSpec(
        inputs=[preset_csvs["case1"]],
        out=tmp_path / "case1_vs_baseline.png",
        compare=preset_csvs["extremes"],
        compare_config=(0.0, 1.0),
    ))
    assert all(p.exists() for p in written)
