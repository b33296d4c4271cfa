"""Real-time bid optimization for group-buying deals (C++ core)."""

from ._core import (
    AdLog,
    BidDecision,
    ClickLogError,
    ConfigError,
    Deal,
    DealState,
    InvalidModel,
    OptimizerConfig,
    PaymentModel,
    Position,
    TailMode,
    TailSettings,
    WinModel,
    assess_admission,
    binomial_pmf,
    expected_profit,
    future_profit,
    generate_synthetic_log,
    marginal_value,
    next_bid,
    objective_curve,
    optimize_bid,
    phi,
    read_click_log,
    static_optimal_bid,
    sweep,
    theta,
    write_click_log,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
