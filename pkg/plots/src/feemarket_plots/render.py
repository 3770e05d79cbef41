"""Render fee-market figures from simulation CSV files.

Consumes exactly the simulator's documented CSV schemas (this package never
imports the simulator):

* grid files -- header
  distribution,n,run,delta_avg,delta_max,k_star,revenue_monopolistic,
  revenue_rsop,gain_ratio_rsop,pay_your_bid_revenue,seed_used
  with detail rows (run >= 0) and per-(distribution, n) mean rows (run = -1);

* revenue-comparison files -- header
  distribution,n,block_size,runs,pay_your_bid_mean,pay_your_bid_stderr,
  capped_monopolistic_mean,capped_monopolistic_stderr,seed_used

Five figures:
  revenue_comparison   pay-your-bid vs capped monopolistic means per block size
  delta_avg            average discount ratio vs n, one series per distribution
  delta_max            maximal discount ratio vs n, one series per distribution
  scatter_kstar_delta  per-run (k*, max discount) scatter
  delta_rsop           miner gain ratio vs n, one series per distribution

Figures are qualitative: axes, series, and trends, not calibrated pixels.
Output is deterministic for fixed input.

Usage: render_figures <figure_id> <input_csv> <output_image> [--log-x {auto,on,off}] [--log-y ...]
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

GRID_HEADER = (
    "distribution,n,run,delta_avg,delta_max,k_star,revenue_monopolistic,"
    "revenue_rsop,gain_ratio_rsop,pay_your_bid_revenue,seed_used"
).split(",")
COMPARISON_HEADER = (
    "distribution,n,block_size,runs,pay_your_bid_mean,pay_your_bid_stderr,"
    "capped_monopolistic_mean,capped_monopolistic_stderr,seed_used"
).split(",")


class RenderError(Exception):
    pass


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    input_csv: str
    output_image: str
    log_x: bool = True
    log_y: bool = True


def _read_rows(path, header):
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as err:
        raise RenderError(f"cannot read {path}: {err}") from None
    with fh:
        reader = csv.reader(fh)
        got = next(reader, None)
        if got != header:
            raise RenderError(
                f"{path}: header does not match the documented schema "
                f"(expected {','.join(header)})"
            )
        rows = [dict(zip(header, row)) for row in reader]
    if not rows:
        raise RenderError(f"{path}: no data rows")
    return rows


def _num(row, key):
    text = row[key]
    return None if text == "" else float(text)


def _series_by_distribution(rows, column, summary_only=True):
    series = {}
    for row in rows:
        run = int(row["run"])
        if summary_only and run != -1:
            continue
        val = _num(row, column)
        if val is None:
            continue
        series.setdefault(row["distribution"], []).append((int(row["n"]), val))
    series = {k: sorted(v) for k, v in series.items() if v}
    if not series:
        raise RenderError(f"no usable values in column {column!r}")
    return series


def _grid_lines(spec: FigureSpec, column: str, ylabel: str, ax):
    rows = _read_rows(spec.input_csv, GRID_HEADER)
    for label, pts in sorted(_series_by_distribution(rows, column).items()):
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=label)
    ax.set_xlabel("number of bidders n")
    ax.set_ylabel(ylabel)
    ax.legend()


def _fig_delta_avg(spec, ax):
    _grid_lines(spec, "delta_avg", "average discount ratio", ax)


def _fig_delta_max(spec, ax):
    _grid_lines(spec, "delta_max", "maximal discount ratio", ax)


def _fig_delta_rsop(spec, ax):
    _grid_lines(spec, "gain_ratio_rsop", "miner gain ratio R/RSOP - 1", ax)


def _fig_scatter(spec, ax):
    rows = _read_rows(spec.input_csv, GRID_HEADER)
    series = {}
    for row in rows:
        if int(row["run"]) < 0:
            continue
        k, d = _num(row, "k_star"), _num(row, "delta_max")
        if k is None or d is None or d <= 0.0:
            continue
        series.setdefault(row["distribution"], []).append((k, d))
    if not series:
        raise RenderError("no per-run (k_star, delta_max) points")
    for label, pts in sorted(series.items()):
        ax.scatter([p[0] for p in pts], [p[1] for p in pts], s=12, label=label, alpha=0.6)
    ax.set_xlabel("accepted transactions k*")
    ax.set_ylabel("maximal discount ratio")
    ax.legend()


def _fig_revenue_comparison(spec, ax):
    rows = _read_rows(spec.input_csv, COMPARISON_HEADER)
    pts = sorted((int(r["block_size"]), _num(r, "pay_your_bid_mean"), _num(r, "capped_monopolistic_mean")) for r in rows)
    sizes = [p[0] for p in pts]
    ax.plot(sizes, [p[1] for p in pts], marker="o", label="pay your bid")
    ax.plot(sizes, [p[2] for p in pts], marker="s", label="monopolistic (capped)")
    ax.set_xlabel("block size")
    ax.set_ylabel("mean revenue")
    ax.legend()


FIGURES = {
    "revenue_comparison": (_fig_revenue_comparison, False, False),
    "delta_avg": (_fig_delta_avg, True, True),
    "delta_max": (_fig_delta_max, True, True),
    "scatter_kstar_delta": (_fig_scatter, True, True),
    "delta_rsop": (_fig_delta_rsop, True, True),
}


def render(spec: FigureSpec) -> str:
    """Draw one figure; returns the output path. No file on failure."""
    if spec.figure_id not in FIGURES:
        raise RenderError(f"unknown figure id {spec.figure_id!r} (have {sorted(FIGURES)})")
    draw, _, _ = FIGURES[spec.figure_id]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    try:
        draw(spec, ax)
        if spec.log_x:
            ax.set_xscale("log")
        if spec.log_y:
            ax.set_yscale("log")
        ax.set_title(spec.figure_id.replace("_", " "))
        fig.tight_layout()
        fig.savefig(spec.output_image, dpi=120)
    finally:
        plt.close(fig)
    return spec.output_image


def _three_way(value: str, default: bool) -> bool:
    return default if value == "auto" else value == "on"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="render_figures", description=__doc__)
    ap.add_argument("figure_id", choices=sorted(FIGURES))
    ap.add_argument("input_csv")
    ap.add_argument("output_image")
    ap.add_argument("--log-x", choices=("auto", "on", "off"), default="auto")
    ap.add_argument("--log-y", choices=("auto", "on", "off"), default="auto")
    args = ap.parse_args(argv)
    _, def_x, def_y = FIGURES[args.figure_id]
    spec = FigureSpec(
        figure_id=args.figure_id,
        input_csv=args.input_csv,
        output_image=args.output_image,
        log_x=_three_way(args.log_x, def_x),
        log_y=_three_way(args.log_y, def_y),
    )
    try:
        render(spec)
    except RenderError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    print(f"wrote {spec.output_image}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
