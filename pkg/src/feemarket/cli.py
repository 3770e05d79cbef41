"""Command-line entry point. Thin adapters only: no mechanism logic here.

Exit codes: 0 success, 1 domain error (one-line message on stderr),
2 usage error (argparse help text). Floats print with 17 significant
digits, which round-trips 64-bit values exactly.
"""

from __future__ import annotations

import argparse
import sys

from feemarket import experiments as ex
from feemarket import rsop as rs
from feemarket.bids import make_bid_vector
from feemarket.errors import FeeMarketError
from feemarket.mechanism import monopolistic_outcome, monopolistic_outcome_capped
from feemarket.strategic import multibid_price, strategic_price


def _num(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def _obj(pairs) -> str:
    return "{" + ",".join(f'"{k}":{v}' for k, v in pairs) + "}"


def _bids_arg(text: str):
    return make_bid_vector([float(x) for x in text.split(",") if x.strip()])


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="feemarket", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("price", help="monopolistic outcome of a bid vector")
    q.add_argument("--bids", required=True)
    q.add_argument("--cap", type=int, default=None)

    q = sub.add_parser("strategic", help="minimal accepted single bid against the others")
    q.add_argument("--others", required=True)

    q = sub.add_parser("multibid", help="cheapest accepted split bid against the others")
    q.add_argument("--others", required=True)

    q = sub.add_parser("rsop", help="one RSOP outcome, or its expected revenue")
    q.add_argument("--bids", required=True)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--alpha", type=float, default=rs.DEFAULT_ALPHA)
    q.add_argument("--samples", type=int, default=None, help="Monte Carlo expected revenue")
    q.add_argument("--exact", action="store_true", help="exact expected revenue (n <= 20)")

    q = sub.add_parser("verify-block", help="consensus verification of a block file")
    q.add_argument("--file", required=True)

    q = sub.add_parser("simulate", help="run the experiment grids from a config file")
    q.add_argument("--config", required=True)
    q.add_argument("--output", default=None, help="output stem override")
    q.add_argument("--threads", type=int, default=1)

    q = sub.add_parser("compare-revenue", help="pay-your-bid vs capped monopolistic sweep")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--block-sizes", required=True)
    q.add_argument("--runs", type=int, default=100)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--format", choices=("csv", "json"), default="csv")
    q.add_argument("--output", default="-")

    q = sub.add_parser("check-conjectures", help="search for revenue-conjecture violations")
    q.add_argument("--n-max", type=int, default=12)
    q.add_argument("--instances", type=int, default=1000)
    q.add_argument("--seed", type=int, default=0)
    return p


def _cmd_price(args) -> int:
    b = _bids_arg(args.bids)
    out = monopolistic_outcome(b) if args.cap is None else monopolistic_outcome_capped(b, args.cap)
    print(_obj([("revenue", _num(out.revenue)), ("k_star", _num(out.k_star)), ("price", _num(out.price))]))
    return 0


def _cmd_strategic(args) -> int:
    p = strategic_price(_bids_arg(args.others))
    print(_obj([("strategic_price", _num(p))]))
    return 0


def _cmd_multibid(args) -> int:
    r = multibid_price(_bids_arg(args.others))
    print(_obj([("total", _num(r.total)), ("b_star", _num(r.b_star)), ("u_star", _num(r.u_star))]))
    return 0


def _cmd_rsop(args) -> int:
    b = _bids_arg(args.bids)
    if args.exact or args.samples:
        mean, stderr = rs.rsop_expected_revenue(b, args.samples or 1000, args.seed)
        print(_obj([("mean", _num(mean)), ("stderr", _num(stderr))]))
        return 0
    part = rs.partition_bids(b.n, args.seed)
    o = rs.rsop_outcome(b, part, args.alpha)
    print(
        _obj(
            [
                ("p_a", _num(o.p_a)),
                ("p_b", _num(o.p_b)),
                ("winners_a", "[" + ",".join(map(str, o.winners_a)) + "]"),
                ("winners_b", "[" + ",".join(map(str, o.winners_b)) + "]"),
                ("revenue", _num(o.revenue)),
                ("miner_share", _num(o.miner_share)),
                ("carry_share", _num(o.carry_share)),
            ]
        )
    )
    return 0


def _cmd_verify_block(args) -> int:
    res = rs.verify_block(rs.load_block(args.file))
    valid = ",".join(_obj([("txid", f'"{t}"'), ("fee", _num(f))]) for t, f in res.valid)
    print(
        _obj(
            [
                ("seed", _num(res.seed)),
                ("p_a", _num(res.outcome.p_a)),
                ("p_b", _num(res.outcome.p_b)),
                ("revenue", _num(res.outcome.revenue)),
                ("miner_share", _num(res.outcome.miner_share)),
                ("carry_share", _num(res.outcome.carry_share)),
                ("valid", "[" + valid + "]"),
            ]
        )
    )
    return 0


def _cmd_simulate(args) -> int:
    cfg = ex.load_config(args.config)
    stem = args.output or cfg.output_path
    if not stem:
        print("error: no output path (set output_path in the config or pass --output)", file=sys.stderr)
        return 1
    fmt = cfg.output_format
    suffix = "csv" if fmt == "csv" else "json"
    ex.emit(ex.run_discount_grid(cfg, threads=args.threads), f"{stem}_discount.{suffix}", fmt)
    ex.emit(ex.run_rsop_grid(cfg, threads=args.threads), f"{stem}_rsop.{suffix}", fmt)
    print(f"wrote {stem}_discount.{suffix} and {stem}_rsop.{suffix}")
    return 0


def _cmd_compare_revenue(args) -> int:
    sizes = [int(x) for x in args.block_sizes.split(",") if x.strip()]
    rows = ex.run_revenue_comparison(args.n, sizes, args.runs, args.seed)
    if args.output == "-":
        text = ex._rows_to_csv(rows, ex.COMPARISON_HEADER, ex.ComparisonRow.FIELDS)
        sys.stdout.write(text)
    else:
        ex.emit_comparison(rows, args.output, args.format)
        print(f"wrote {args.output}")
    return 0


def _cmd_check_conjectures(args) -> int:
    import numpy as np

    from feemarket import prng
    from feemarket.distributions import ValueDistribution, sample

    kinds = (ValueDistribution.discrete_uniform(), ValueDistribution.uniform01())
    violations = 0
    for t in range(args.instances):
        seed = prng.split_seed(args.seed, t)
        n = 1 + int(prng.uniforms(prng.split_seed(seed, 1), 1)[0] * args.n_max)
        b = sample(kinds[t % len(kinds)], n, seed)
        holds, witness = rs.check_conjecture_rsop_leq_monopolistic(b)
        if not holds:
            violations += 1
            print(f"VIOLATION: bids={b.values.tolist()} partition={witness.as_labels()}")
    verdict = "pass" if violations == 0 else f"fail ({violations} witnesses)"
    print(f"rsop-revenue-at-most-monopolistic: {verdict} over {args.instances} instances (n <= {args.n_max})")
    return 0


_COMMANDS = {
    "price": _cmd_price,
    "strategic": _cmd_strategic,
    "multibid": _cmd_multibid,
    "rsop": _cmd_rsop,
    "verify-block": _cmd_verify_block,
    "simulate": _cmd_simulate,
    "compare-revenue": _cmd_compare_revenue,
    "check-conjectures": _cmd_check_conjectures,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except FeeMarketError as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
