#pragma once

#include <cstdint>
#include <string_view>

#include "dealbid/binomial.hpp"
#include "dealbid/brent.hpp"
#include "dealbid/profit.hpp"
#include "dealbid/rng.hpp"
#include "dealbid/win_model.hpp"

namespace dealbid {

struct OptimizerConfig {
  // Bid-space tolerance. Zero means (hi - lo) * 1e-5 of the model's bounds.
  double abs_tol = 0.0;
  int max_iters = 100;
  // Opportunities that get a full random multi-start before warm starts take over.
  int multi_start_impressions = 20;
  int starts_per_impression = 8;
  // Re-optimize after this many opportunities without a click.
  int recompute_interval = 32;
  // Warm starts are nudged by up to +-warm_jitter * abs_tol.
  double warm_jitter = 10.0;
  TailSettings tail;

  void validate() const;
  double tolerance_for(const BidBounds& b) const { return abs_tol > 0.0 ? abs_tol : b.width() * 1e-5; }
};

enum class OptimizationPath { multi_start, warm_start, cached };

std::string_view to_string(OptimizationPath p);

struct BidDecision {
  double bid = 0.0;
  OptimizationPath path = OptimizationPath::cached;
  int evaluations = 0;  // objective evaluations spent on this call
  double objective = 0.0;  // future_profit at `bid`; NaN on the cached path
};

/// Picks the bid for the next impression opportunity and updates the
/// optimizer bookkeeping in `state`:
///  - the first multi_start_impressions calls run a random multi-start;
///  - afterwards, a click since the last optimization or recompute_interval
///    opportunities without one trigger a single warm start from the cached
///    bid;
///  - otherwise the cached bid is returned without evaluating anything.
/// Throws std::logic_error if the deal has expired.
BidDecision next_bid(const Deal& deal, DealState& state, const WinModel& win,
                     const PaymentModel& pay, const OptimizerConfig& cfg, Rng& rng);

/// Full multi-start maximization of future_profit at `pos`.
ScalarMaximum optimize_bid(const Deal& deal, const Position& pos, const WinModel& win,
                           const PaymentModel& pay, const OptimizerConfig& cfg, Rng& rng);

struct AdmissionDecision {
  double bid = 0.0;
  double expected_profit = 0.0;
  bool admitted = false;
};

/// Optimizes the fresh-deal expected profit over `expected_visits` visits and
/// admits the deal when the optimum is strictly above `threshold`. (Bidding the
/// support minimum always yields exactly zero, so ">= 0" would admit anything.)
AdmissionDecision assess_admission(const Deal& deal, int expected_visits, const WinModel& win,
                                   const PaymentModel& pay, const OptimizerConfig& cfg,
                                   double threshold, Rng& rng);

}  // namespace dealbid
