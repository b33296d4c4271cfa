#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "dealbid/binomial.hpp"
#include "dealbid/win_model.hpp"

namespace dealbid {

/// Static contract of a group-buying deal: pays `pay_per_click` for every
/// click, but only if at least `required_clicks` arrive within `expiry` visits.
struct Deal {
  int required_clicks = 0;
  int expiry = 1;  // in user visits
  double pay_per_click = 0.0;
  double ctr = 0.0;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

/// Where a campaign stands at one instant. This is all the expected profit
/// depends on; DealState carries the bookkeeping around it.
struct Position {
  int clicks = 0;            // c_t
  int remaining_clicks = 0;  // r_t = max(m - c_t, 0)
  int remaining_visits = 0;  // u_t
  double spend = 0.0;        // sum of payments so far

  /// Fresh deal at t = 0 with `visits` expected visits ahead.
  static Position fresh(const Deal& deal, int visits) {
    return {0, deal.required_clicks, visits, 0.0};
  }
};

/// Dynamic campaign state, mutated by a single owner during a replay.
struct DealState {
  int visits = 0;  // t
  int clicks = 0;
  double spend = 0.0;

  // Optimizer bookkeeping for the recompute policy.
  std::optional<double> cached_bid;
  int opportunities_since_recompute = 0;
  int starts_done = 0;
  int clicks_at_last_optimization = 0;

  int remaining_clicks(const Deal& d) const { return std::max(d.required_clicks - clicks, 0); }
  int remaining_visits(const Deal& d) const { return d.expiry - visits; }
  bool tipped(const Deal& d) const { return clicks >= d.required_clicks; }
  bool expired(const Deal& d) const { return remaining_visits(d) <= 0; }

  Position position(const Deal& d) const {
    return {clicks, remaining_clicks(d), remaining_visits(d), spend};
  }

  /// Advances one visit.
  void record(bool won, bool clicked, double payment) {
    ++visits;
    if (won) {
      spend += payment;
      if (clicked) ++clicks;
    }
  }
};

/// Composite per-visit success probability mu * d(bid).
inline double success_probability(const Deal& deal, const WinModel& win, double bid) {
  return std::clamp(deal.ctr * win.win_probability(bid), 0.0, 1.0);
}

/// Expected profit from here on, excluding what has already been spent:
///   c*rho*Phi(r,u,p) + rho*Theta(r,u,p) - u*d(b)*h(b),  p = mu*d(b).
/// This is the quantity the optimizer maximizes.
double future_profit(const Deal& deal, const Position& pos, double bid, const WinModel& win,
                     const PaymentModel& pay, const TailSettings& tail = {});

/// Expected final profit: future_profit(...) - spend.
double expected_profit(const Deal& deal, const Position& pos, double bid, const WinModel& win,
                       const PaymentModel& pay, const TailSettings& tail = {});

/// Expected profit of a deal that has no guarantee left (r = 0):
///   c*rho + u*d(b)*(rho*mu - h(b)) - spend.
double non_guaranteed_profit(const Deal& deal, const Position& pos, double bid,
                             const WinModel& win, const PaymentModel& pay);

/// Expected revenue gained by winning this impression (the deal's private
/// value for it):
///   mu*rho*[(c + r - 1) * C(u-1, r-1) p^(r-1) (1-p)^(u-r) + Phi(r-1, u-1, p)].
/// Equals mu*rho once the deal has tipped. Requires remaining_visits >= 1.
double marginal_value(const Deal& deal, const Position& pos, double bid, const WinModel& win,
                      const TailSettings& tail = {});

/// Expected profit of a fresh deal over `expected_visits` visits, used to
/// decide admission before any bidding happens.
double admissibility_profit(const Deal& deal, double bid, int expected_visits,
                            const WinModel& win, const PaymentModel& pay,
                            const TailSettings& tail = {});

/// Bid maximizing the single-impression profit d(b)*(rho*mu - h(b)), the
/// classic optimum for an ad without guarantees. Searched numerically on
/// [bounds.lo, max(bounds.hi, rho*mu)]; returns bounds.lo when rho*mu <= 0.
double static_optimal_bid(const Deal& deal, const WinModel& win,
                          const PaymentModel& pay = PaymentModel::first_price());

}  // namespace dealbid
