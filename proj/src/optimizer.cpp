#include "dealbid/optimizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace dealbid {

void OptimizerConfig::validate() const {
  if (abs_tol < 0.0 || !std::isfinite(abs_tol)) throw std::invalid_argument("abs_tol must be >= 0");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (multi_start_impressions < 1) throw std::invalid_argument("multi_start_impressions must be >= 1");
  if (starts_per_impression < 1) throw std::invalid_argument("starts_per_impression must be >= 1");
  if (recompute_interval < 1) throw std::invalid_argument("recompute_interval must be >= 1");
  if (warm_jitter < 0.0) throw std::invalid_argument("warm_jitter must be >= 0");
  if (!(tail.normal_min_variance >= 0.0)) throw std::invalid_argument("normal_min_variance must be >= 0");
}

std::string_view to_string(OptimizationPath p) {
  switch (p) {
    case OptimizationPath::multi_start:
      return "multi_start";
    case OptimizationPath::warm_start:
      return "warm_start";
    case OptimizationPath::cached:
      return "cached";
  }
  return "?";
}

namespace {

std::vector<double> random_starts(const BidBounds& b, int n, Rng& rng) {
  std::vector<double> starts(static_cast<std::size_t>(n));
  for (auto& s : starts) s = rng.uniform(b.lo, b.hi);
  return starts;
}

}  // namespace

ScalarMaximum optimize_bid(const Deal& deal, const Position& pos, const WinModel& win,
                           const PaymentModel& pay, const OptimizerConfig& cfg, Rng& rng) {
  const BidBounds bounds = win.bounds();
  auto f = [&](double b) { return future_profit(deal, pos, b, win, pay, cfg.tail); };
  const auto starts = random_starts(bounds, cfg.starts_per_impression, rng);
  return multi_start_maximize(f, bounds, starts, cfg.tolerance_for(bounds), cfg.max_iters);
}

BidDecision next_bid(const Deal& deal, DealState& state, const WinModel& win,
                     const PaymentModel& pay, const OptimizerConfig& cfg, Rng& rng) {
  if (state.expired(deal)) throw std::logic_error("next_bid called on an expired deal");

  const BidBounds bounds = win.bounds();
  const double tol = cfg.tolerance_for(bounds);
  const Position pos = state.position(deal);
  auto f = [&](double b) { return future_profit(deal, pos, b, win, pay, cfg.tail); };

  BidDecision out;
  ScalarMaximum best;
  if (state.starts_done < cfg.multi_start_impressions || !state.cached_bid) {
    const auto starts = random_starts(bounds, cfg.starts_per_impression, rng);
    best = multi_start_maximize(f, bounds, starts, tol, cfg.max_iters);
    ++state.starts_done;
    out.path = OptimizationPath::multi_start;
  } else {
    ++state.opportunities_since_recompute;
    const bool clicked = state.clicks != state.clicks_at_last_optimization;
    if (!clicked && state.opportunities_since_recompute < cfg.recompute_interval) {
      out.bid = *state.cached_bid;
      out.path = OptimizationPath::cached;
      out.objective = std::numeric_limits<double>::quiet_NaN();
      return out;
    }
    const double jitter = cfg.warm_jitter * tol * (2.0 * rng.uniform01() - 1.0);
    const double start = std::clamp(*state.cached_bid + jitter, bounds.lo, bounds.hi);
    best = multi_start_maximize(f, bounds, std::span<const double>(&start, 1), tol, cfg.max_iters);
    out.path = OptimizationPath::warm_start;
  }

  state.cached_bid = best.bid;
  state.opportunities_since_recompute = 0;
  state.clicks_at_last_optimization = state.clicks;
  out.bid = best.bid;
  out.evaluations = best.evaluations;
  out.objective = best.value;
  return out;
}

AdmissionDecision assess_admission(const Deal& deal, int expected_visits, const WinModel& win,
                                   const PaymentModel& pay, const OptimizerConfig& cfg,
                                   double threshold, Rng& rng) {
  const auto best = optimize_bid(deal, Position::fresh(deal, expected_visits), win, pay, cfg, rng);
  return {best.bid, best.value, best.value > threshold};
}

}  // namespace dealbid
