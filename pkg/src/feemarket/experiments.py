"""Monte Carlo experiment grids over (distribution, n = 2^i, run).

Every run gets its own sub-seed, split from the base seed by (distribution
index, exponent, run index), so runs are independent tasks: a thread pool
may execute them in any order and the output is still byte-identical --
rows are sorted into canonical order before aggregation and emission.

Output schemas (documented wire formats):

* grid CSV header (discount and RSOP grids):
  distribution,n,run,delta_avg,delta_max,k_star,revenue_monopolistic,
  revenue_rsop,gain_ratio_rsop,pay_your_bid_revenue,seed_used

  Detail rows have run >= 0. One aggregate row per (distribution, n)
  follows, marked run = -1, carrying arithmetic means over the runs;
  standard errors are available from `aggregate_stats`. Fields a grid does
  not produce are empty (JSON null). A run where the RSOP revenue is zero
  cannot form a gain ratio; such rows keep revenue_rsop = 0 and an empty
  gain_ratio_rsop as the flagged sentinel, and aggregates skip them.

* revenue-comparison CSV header:
  distribution,n,block_size,runs,pay_your_bid_mean,pay_your_bid_stderr,
  capped_monopolistic_mean,capped_monopolistic_stderr,seed_used

Config files (JSON, or TOML on .toml paths) mirror ExperimentConfig field
names exactly; distributions are given as {"kind": ..., ...} objects or
plain kind strings.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from feemarket import prng
from feemarket._backend import kernels
from feemarket.bids import BidVector
from feemarket.distributions import ValueDistribution, sample
from feemarket.mechanism import monopolistic_outcome, monopolistic_outcome_capped, pay_your_bid_revenue
from feemarket.strategic import DEFAULT_SUBSAMPLE, EXACT_AVG_LIMIT, discount_stats

GRID_HEADER = (
    "distribution,n,run,delta_avg,delta_max,k_star,revenue_monopolistic,"
    "revenue_rsop,gain_ratio_rsop,pay_your_bid_revenue,seed_used"
)
COMPARISON_HEADER = (
    "distribution,n,block_size,runs,pay_your_bid_mean,pay_your_bid_stderr,"
    "capped_monopolistic_mean,capped_monopolistic_stderr,seed_used"
)

MEAN_ROW = -1

STREAM_SUBSAMPLE = 21
STREAM_RSOP = 22


@dataclass(frozen=True)
class ExperimentConfig:
    distributions: tuple[ValueDistribution, ...]
    n_exponents: tuple[int, int] = (3, 14)  # inclusive; the full grid runs to 17
    runs_per_point: int = 100
    mode: str = "multibid"
    base_seed: int = 42
    avg_subsample: int | None = None  # None -> exact up to 2^12, 256 above
    alpha: float = 0.1
    output_path: str | None = None
    output_format: str = "csv"

    def exponents(self) -> range:
        lo, hi = self.n_exponents
        if hi < lo:
            raise ValueError("empty exponent range")
        return range(lo, hi + 1)


@dataclass(frozen=True)
class ResultRow:
    distribution: str
    n: int
    run: int
    delta_avg: float | None
    delta_max: float | None
    k_star: float | None
    revenue_monopolistic: float | None
    revenue_rsop: float | None
    gain_ratio_rsop: float | None
    pay_your_bid_revenue: float | None = None
    seed_used: int | None = None

    FIELDS = (
        "distribution", "n", "run", "delta_avg", "delta_max", "k_star",
        "revenue_monopolistic", "revenue_rsop", "gain_ratio_rsop",
        "pay_your_bid_revenue", "seed_used",
    )


@dataclass(frozen=True)
class ComparisonRow:
    distribution: str
    n: int
    block_size: int
    runs: int
    pay_your_bid_mean: float
    pay_your_bid_stderr: float
    capped_monopolistic_mean: float
    capped_monopolistic_stderr: float
    seed_used: int

    FIELDS = (
        "distribution", "n", "block_size", "runs", "pay_your_bid_mean",
        "pay_your_bid_stderr", "capped_monopolistic_mean",
        "capped_monopolistic_stderr", "seed_used",
    )


def resolve_threads(threads: int | None) -> int:
    """Requested thread count, capped by the FEEMARKET_THREADS env var."""
    cap = os.environ.get("FEEMARKET_THREADS")
    t = threads if threads and threads > 0 else 1
    if cap:
        t = min(t, max(1, int(cap)))
    return t


def _run_tasks(tasks, worker, threads):
    t = resolve_threads(threads)
    if t <= 1 or len(tasks) <= 1:
        return [worker(task) for task in tasks]
    with ThreadPoolExecutor(max_workers=t) as pool:
        return list(pool.map(worker, tasks))


def _mean(xs: list[float]) -> float | None:
    return math.fsum(xs) / len(xs) if xs else None


def _stderr(xs: list[float]) -> float | None:
    if not xs:
        return None
    if len(xs) == 1:
        return 0.0
    m = math.fsum(xs) / len(xs)
    var = math.fsum((x - m) ** 2 for x in xs) / (len(xs) - 1)
    return math.sqrt(var / len(xs))


def _group(rows: list[ResultRow]):
    groups: dict[tuple[str, int], list[ResultRow]] = {}
    order = []
    for r in rows:
        if r.run < 0:
            continue
        key = (r.distribution, r.n)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(r)
    return order, groups


_NUMERIC = ResultRow.FIELDS[3:-1]  # delta_avg .. pay_your_bid_revenue


def _summaries(rows: list[ResultRow]) -> list[ResultRow]:
    """One mean row (run = -1) per (distribution, n), in detail-row order."""
    order, groups = _group(rows)
    out = []
    for key in order:
        rs = groups[key]
        vals = {}
        for name in _NUMERIC:
            present = [getattr(r, name) for r in rs if getattr(r, name) is not None]
            vals[name] = _mean(present)
        out.append(ResultRow(distribution=key[0], n=key[1], run=MEAN_ROW, seed_used=None, **vals))
    return out


def aggregate_stats(rows: list[ResultRow]) -> dict[tuple[str, int], dict[str, tuple[float | None, float | None]]]:
    """(mean, stderr) per numeric column per (distribution, n) over detail rows.

    The emitted CSV carries only the mean summary rows; standard errors live
    here for callers that set tolerances.
    """
    order, groups = _group(rows)
    out = {}
    for key in order:
        rs = groups[key]
        out[key] = {}
        for name in _NUMERIC:
            present = [getattr(r, name) for r in rs if getattr(r, name) is not None]
            out[key][name] = (_mean(present), _stderr(present))
    return out


def run_discount_grid(cfg: ExperimentConfig, threads: int | None = None) -> list[ResultRow]:
    """Discount-ratio grid: one row per (distribution, 2^i, run), plus summaries."""
    tasks = [
        (d, dist, i, run)
        for d, dist in enumerate(cfg.distributions)
        for i in cfg.exponents()
        for run in range(cfg.runs_per_point)
    ]

    def worker(task) -> ResultRow:
        d, dist, i, run = task
        n = 1 << i
        seed = prng.split_seed(cfg.base_seed, d, i, run)
        b = sample(dist, n, seed)
        sub = None
        if n > EXACT_AVG_LIMIT:
            sub = cfg.avg_subsample or DEFAULT_SUBSAMPLE
        stats = discount_stats(
            b, cfg.mode, avg_subsample=sub,
            subsample_seed=prng.split_seed(seed, STREAM_SUBSAMPLE),
        )
        out = monopolistic_outcome(b)
        return ResultRow(
            distribution=dist.label, n=n, run=run,
            delta_avg=stats.delta_avg, delta_max=stats.delta_max,
            k_star=stats.k_star, revenue_monopolistic=out.revenue,
            revenue_rsop=None, gain_ratio_rsop=None,
            pay_your_bid_revenue=None, seed_used=seed,
        )

    rows = _run_tasks(tasks, worker, threads)
    rows.sort(key=lambda r: (r.distribution, r.n, r.run))
    return rows + _summaries(rows)


def run_rsop_grid(cfg: ExperimentConfig, threads: int | None = None) -> list[ResultRow]:
    """Miner gain-ratio grid: monopolistic vs one-sample RSOP revenue per run."""
    tasks = [
        (d, dist, i, run)
        for d, dist in enumerate(cfg.distributions)
        for i in cfg.exponents()
        for run in range(cfg.runs_per_point)
    ]

    def worker(task) -> ResultRow:
        d, dist, i, run = task
        n = 1 << i
        seed = prng.split_seed(cfg.base_seed, d, i, run)
        b = sample(dist, n, seed)
        out = monopolistic_outcome(b)
        labels = prng.bits(prng.split_seed(seed, STREAM_RSOP), n)
        rsop_rev = kernels.rsop_eval(b.values, labels)[4]
        gain = out.revenue / rsop_rev - 1.0 if rsop_rev > 0 else None
        return ResultRow(
            distribution=dist.label, n=n, run=run,
            delta_avg=None, delta_max=None,
            k_star=out.k_star, revenue_monopolistic=out.revenue,
            revenue_rsop=rsop_rev, gain_ratio_rsop=gain,
            pay_your_bid_revenue=None, seed_used=seed,
        )

    rows = _run_tasks(tasks, worker, threads)
    rows.sort(key=lambda r: (r.distribution, r.n, r.run))
    return rows + _summaries(rows)


def run_revenue_comparison(
    n: int, block_sizes, runs: int, seed: int, threads: int | None = None
) -> list[ComparisonRow]:
    """Pay-your-bid vs capped monopolistic revenue, uniform (0,1) values.

    Each run draws one value vector and evaluates every block size on it, so
    the per-draw monotonicity of the capped mechanism carries into the
    sweep.
    """
    dist = ValueDistribution.uniform01()
    sizes = sorted(set(int(s) for s in block_sizes))

    def worker(run: int):
        b = sample(dist, n, prng.split_seed(seed, run))
        return (
            [pay_your_bid_revenue(b, s) for s in sizes],
            [monopolistic_outcome_capped(b, s).revenue for s in sizes],
        )

    results = _run_tasks(list(range(runs)), worker, threads)
    rows = []
    for si, s in enumerate(sizes):
        pyb = [res[0][si] for res in results]
        mono = [res[1][si] for res in results]
        rows.append(
            ComparisonRow(
                distribution=dist.label, n=n, block_size=s, runs=runs,
                pay_your_bid_mean=_mean(pyb), pay_your_bid_stderr=_stderr(pyb),
                capped_monopolistic_mean=_mean(mono),
                capped_monopolistic_stderr=_stderr(mono),
                seed_used=seed,
            )
        )
    return rows


# ---------------------------------------------------------------------------
# serialization

def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _rows_to_csv(rows, header: str, fields) -> str:
    lines = [header]
    for r in rows:
        lines.append(",".join(_fmt(getattr(r, name)) for name in fields))
    return "\n".join(lines) + "\n"


def _rows_to_json(rows, fields) -> str:
    payload = [{name: getattr(r, name) for name in fields} for r in rows]
    return json.dumps(payload, indent=0, sort_keys=False) + "\n"


def emit(rows: list[ResultRow], path, fmt: str = "csv") -> None:
    """Write grid rows; byte-stable for fixed inputs."""
    if fmt == "csv":
        text = _rows_to_csv(rows, GRID_HEADER, ResultRow.FIELDS)
    elif fmt == "json":
        text = _rows_to_json(rows, ResultRow.FIELDS)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def emit_comparison(rows: list[ComparisonRow], path, fmt: str = "csv") -> None:
    if fmt == "csv":
        text = _rows_to_csv(rows, COMPARISON_HEADER, ComparisonRow.FIELDS)
    elif fmt == "json":
        text = _rows_to_json(rows, ComparisonRow.FIELDS)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def parse_rows(path, fmt: str = "json") -> list[ResultRow]:
    """Read grid rows back (JSON round-trip helper)."""
    if fmt != "json":
        raise ValueError("round-trip parsing is defined for the JSON format")
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    return [ResultRow(**obj) for obj in payload]


# ---------------------------------------------------------------------------
# config files

def _dist_from_obj(obj) -> ValueDistribution:
    if isinstance(obj, str):
        obj = {"kind": obj}
    kind = obj["kind"]
    if kind == "discrete_uniform_1_100":
        return ValueDistribution.discrete_uniform()
    if kind == "uniform_01":
        return ValueDistribution.uniform01()
    if kind == "half_normal":
        return ValueDistribution.half_normal(float(obj.get("sigma", 1.0)))
    if kind == "inverse":
        return ValueDistribution.inverse()
    if kind == "bitcoin_data":
        return ValueDistribution.from_data(obj["path"], obj.get("transform", "identity"))
    raise ValueError(f"unknown distribution kind {kind!r}")


def load_config(path) -> ExperimentConfig:
    """Load an ExperimentConfig from JSON or TOML (field names match 1:1)."""
    with open(path, "rb") as fh:
        text = fh.read()
    if str(path).endswith(".toml"):
        try:
            import tomllib as toml
        except ImportError:
            import tomli as toml
        obj = toml.loads(text.decode("utf-8"))
    else:
        obj = json.loads(text.decode("utf-8"))
    dists = tuple(_dist_from_obj(d) for d in obj["distributions"])
    lo, hi = obj.get("n_exponents", (3, 14))
    return ExperimentConfig(
        distributions=dists,
        n_exponents=(int(lo), int(hi)),
        runs_per_point=int(obj.get("runs_per_point", 100)),
        mode=obj.get("mode", "multibid"),
        base_seed=int(obj.get("base_seed", 42)),
        avg_subsample=(int(obj["avg_subsample"]) if obj.get("avg_subsample") else None),
        alpha=float(obj.get("alpha", 0.1)),
        output_path=obj.get("output_path"),
        output_format=obj.get("output_format", "csv"),
    )
