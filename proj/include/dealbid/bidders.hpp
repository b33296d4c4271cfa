#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "dealbid/optimizer.hpp"

namespace dealbid {

enum class StrategyKind { real_time, static_optimal, adaptive, random };

std::string_view to_string(StrategyKind k);
/// Accepts "rt", "real_time", "static", "static_optimal", "adaptive", "random".
StrategyKind parse_strategy_kind(std::string_view name);

struct StrategySpec {
  StrategyKind kind = StrategyKind::real_time;
  std::string name;  // label used in reports; defaults to to_string(kind)
  OptimizerConfig optimizer;
  // Range for the random bidder; defaults to the win model's bounds.
  std::optional<double> random_lo;
  std::optional<double> random_hi;

  std::string label() const { return name.empty() ? std::string(to_string(kind)) : name; }
};

/// One strategy driving one deal. Owns the per-deal random stream; the
/// DealState passed to bid() must belong to the same deal.
///
/// Once the deal has tipped, every strategy bids the static optimum: the
/// guarantee no longer binds and the static bid is optimal from there on.
class DealBidder {
 public:
  DealBidder(StrategySpec spec, Deal deal, WinModel assumed,
             PaymentModel pay = PaymentModel::first_price(), std::uint64_t seed = 0);

  /// Throws std::logic_error on an expired deal.
  double bid(DealState& state);

  /// Path and work of the most recent real-time decision (cached when the
  /// last bid did not go through the optimizer).
  const BidDecision& last_decision() const { return last_; }

  double static_bid() const { return static_bid_; }
  const StrategySpec& spec() const { return spec_; }
  const Deal& deal() const { return deal_; }

 private:
  StrategySpec spec_;
  Deal deal_;
  WinModel win_;
  PaymentModel pay_;
  Rng rng_;
  double static_bid_;
  BidDecision last_;
};

/// The adaptive baseline: static optimum + r/u - ctr, floored at zero.
double adaptive_bid(double static_bid, const Deal& deal, const DealState& state);

}  // namespace dealbid
