#include "dealbid/bidders.hpp"

#include <stdexcept>

namespace dealbid {

std::string_view to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::real_time:
      return "rt";
    case StrategyKind::static_optimal:
      return "static";
    case StrategyKind::adaptive:
      return "adaptive";
    case StrategyKind::random:
      return "random";
  }
  return "?";
}

StrategyKind parse_strategy_kind(std::string_view name) {
  if (name == "rt" || name == "real_time") return StrategyKind::real_time;
  if (name == "static" || name == "static_optimal") return StrategyKind::static_optimal;
  if (name == "adaptive") return StrategyKind::adaptive;
  if (name == "random") return StrategyKind::random;
  throw std::invalid_argument("unknown strategy: " + std::string(name));
}

double adaptive_bid(double static_bid, const Deal& deal, const DealState& state) {
  const double u = state.remaining_visits(deal);
  const double r = state.remaining_clicks(deal);
  return std::max(0.0, static_bid + r / u - deal.ctr);
}

DealBidder::DealBidder(StrategySpec spec, Deal deal, WinModel assumed, PaymentModel pay,
                       std::uint64_t seed)
    : spec_(std::move(spec)),
      deal_(deal),
      win_(assumed),
      pay_(pay),
      rng_(seed),
      static_bid_(static_optimal_bid(deal, assumed, pay)) {
  deal_.validate();
  spec_.optimizer.validate();
  if (spec_.kind == StrategyKind::random) {
    const BidBounds b = win_.bounds();
    if (!spec_.random_lo) spec_.random_lo = b.lo;
    if (!spec_.random_hi) spec_.random_hi = b.hi;
    if (*spec_.random_lo < 0.0 || *spec_.random_hi < *spec_.random_lo) {
      throw std::invalid_argument("random bidder needs 0 <= lo <= hi");
    }
  }
}

double DealBidder::bid(DealState& state) {
  if (state.expired(deal_)) throw std::logic_error("bid requested for an expired deal");
  last_ = BidDecision{};
  if (state.tipped(deal_)) return static_bid_;

  switch (spec_.kind) {
    case StrategyKind::real_time:
      last_ = next_bid(deal_, state, win_, pay_, spec_.optimizer, rng_);
      return last_.bid;
    case StrategyKind::static_optimal:
      return static_bid_;
    case StrategyKind::adaptive:
      return adaptive_bid(static_bid_, deal_, state);
    case StrategyKind::random:
      return rng_.uniform(*spec_.random_lo, *spec_.random_hi);
  }
  return static_bid_;
}

}  // namespace dealbid
