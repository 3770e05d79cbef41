"""Auction mechanisms for blockchain transaction-fee markets.

Monopolistic pricing (one clearing fee per block, chosen to maximize
revenue), the random-sampling optimal price auction with hash-seeded block
verification, strategic-bidding analysis for both, and a reproducible Monte
Carlo experiment harness.

Hot kernels live in a compiled extension with a pure-numpy fallback chosen
at import; see `feemarket.backend_name()` and benchmarks/bench_kernels.py.
"""

from feemarket._backend import backend_name
from feemarket.bids import BidVector, make_bid_vector, num_at_least
from feemarket.distributions import (
    ValueDistribution,
    ValuePool,
    load_bitcoin_values,
    load_value_pool,
    sample,
    synthetic_data_path,
)
from feemarket.errors import (
    BudgetExceeded,
    DuplicateTxId,
    EmptyOthers,
    EmptyPool,
    EmptySupport,
    FeeMarketError,
    IndexOutOfRange,
    LengthMismatch,
    MalformedBlock,
    MalformedRow,
    NonFiniteBid,
    NonPositiveBid,
    TooFewBidders,
)
from feemarket.experiments import (
    ComparisonRow,
    ExperimentConfig,
    ResultRow,
    aggregate_stats,
    emit,
    emit_comparison,
    load_config,
    run_discount_grid,
    run_revenue_comparison,
    run_rsop_grid,
)
from feemarket.mechanism import (
    MonopolisticOutcome,
    monopolistic_outcome,
    monopolistic_outcome_capped,
    pay_your_bid_revenue,
)
from feemarket.rsop import (
    AugmentedBids,
    Block,
    BlockVerification,
    Partition,
    RsopOutcome,
    block_from_dict,
    check_conjecture_rsop_leq_monopolistic,
    false_bid_expected_net,
    false_bid_strategy,
    load_block,
    miner_net_revenue,
    partition_bids,
    remove_bids_search,
    rsop_expected_revenue,
    rsop_outcome,
    rsop_split_probe,
    truthfulness_probe,
    verify_block,
)
from feemarket.strategic import (
    DiscountStats,
    MultibidResult,
    discount_ratio,
    discount_stats,
    multibid_oracle,
    multibid_price,
    strategic_price,
    worst_case_discount,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
