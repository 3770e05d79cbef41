import os
from pathlib import Path

import pytest

from feemarket_plots.render import FIGURES, FigureSpec, RenderError, main, render

SAMPLES = Path(__file__).resolve().parent.parent / "sample_data"

INPUTS = {
    "revenue_comparison": SAMPLES / "comparison.csv",
    "delta_avg": SAMPLES / "grid_discount.csv",
    "delta_max": SAMPLES / "grid_discount.csv",
    "scatter_kstar_delta": SAMPLES / "grid_discount.csv",
    "delta_rsop": SAMPLES / "grid_rsop.csv",
}


@pytest.mark.parametrize("figure_id", sorted(FIGURES))
def test_renders_all_figures_from_samples(figure_id, tmp_path):
    out = tmp_path / f"{figure_id}.png"
    got = render(FigureSpec(figure_id, str(INPUTS[figure_id]), str(out)))
    assert got == str(out)
    assert out.exists() and out.stat().st_size > 0


def test_cli_round_trip(tmp_path):
    out = tmp_path / "fig.png"
    code = main(["delta_avg", str(INPUTS["delta_avg"]), str(out)])
    assert code == 0 and out.stat().st_size > 0


def test_deterministic_output(tmp_path):
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    render(FigureSpec("delta_max", str(INPUTS["delta_max"]), str(a)))
    render(FigureSpec("delta_max", str(INPUTS["delta_max"]), str(b)))
    assert a.read_bytes() == b.read_bytes()


def test_three_series_in_sample():
    import csv

    with open(INPUTS["delta_avg"], newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len({r["distribution"] for r in rows}) == 3


def test_missing_file_errors(tmp_path):
    out = tmp_path / "fig.png"
    code = main(["delta_avg", str(tmp_path / "nope.csv"), str(out)])
    assert code == 1
    assert not out.exists()


def test_empty_data_errors(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text(
        "distribution,n,run,delta_avg,delta_max,k_star,revenue_monopolistic,"
        "revenue_rsop,gain_ratio_rsop,pay_your_bid_revenue,seed_used\n"
    )
    out = tmp_path / "fig.png"
    code = main(["delta_avg", str(empty), str(out)])
    assert code == 1
    assert not out.exists()


def test_wrong_header_errors(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b,c\n1,2,3\n")
    out = tmp_path / "fig.png"
    with pytest.raises(RenderError):
        render(FigureSpec("delta_rsop", str(bad), str(out)))
    assert not out.exists()


def test_unknown_figure_id(tmp_path):
    with pytest.raises(RenderError):
        render(FigureSpec("nope", str(INPUTS["delta_avg"]), str(tmp_path / "x.png")))
