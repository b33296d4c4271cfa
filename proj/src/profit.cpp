#include "dealbid/profit.hpp"

#include <cmath>
#include <string>

#include "dealbid/brent.hpp"

namespace dealbid {

void Deal::validate() const {
  if (required_clicks < 0) throw std::invalid_argument("required_clicks must be >= 0");
  if (expiry < 1) throw std::invalid_argument("expiry must be >= 1");
  if (!(pay_per_click >= 0.0) || !std::isfinite(pay_per_click)) {
    throw std::invalid_argument("pay_per_click must be finite and >= 0");
  }
  if (!(ctr >= 0.0 && ctr <= 1.0)) throw std::invalid_argument("ctr must lie in [0,1]");
}

double future_profit(const Deal& deal, const Position& pos, double bid, const WinModel& win,
                     const PaymentModel& pay, const TailSettings& tail) {
  const double d = win.win_probability(bid);
  const double p = std::clamp(deal.ctr * d, 0.0, 1.0);
  const int r = pos.remaining_clicks;
  const int u = pos.remaining_visits;
  const double rho = deal.pay_per_click;
  const double revenue = pos.clicks * rho * phi(r, u, p, tail) + rho * theta(r, u, p, tail);
  return revenue - u * d * pay.payment(bid);
}

double expected_profit(const Deal& deal, const Position& pos, double bid, const WinModel& win,
                       const PaymentModel& pay, const TailSettings& tail) {
  return future_profit(deal, pos, bid, win, pay, tail) - pos.spend;
}

double non_guaranteed_profit(const Deal& deal, const Position& pos, double bid,
                             const WinModel& win, const PaymentModel& pay) {
  const double d = win.win_probability(bid);
  const double rho = deal.pay_per_click;
  return pos.clicks * rho + pos.remaining_visits * d * (rho * deal.ctr - pay.payment(bid)) -
         pos.spend;
}

double marginal_value(const Deal& deal, const Position& pos, double bid, const WinModel& win,
                      const TailSettings& tail) {
  if (pos.remaining_visits < 1) {
    throw std::invalid_argument("marginal_value needs at least one remaining visit");
  }
  const double mu_rho = deal.ctr * deal.pay_per_click;
  const int r = pos.remaining_clicks;
  const int u = pos.remaining_visits;
  const double p = success_probability(deal, win, bid);
  // C(u-1, r-1) p^(r-1) (1-p)^(u-r) is the Bin(u-1, p) pmf at r-1; zero for r = 0.
  const double boundary = binomial_pmf(r - 1, u - 1, p);
  return mu_rho * ((pos.clicks + r - 1) * boundary + phi(r - 1, u - 1, p, tail));
}

double admissibility_profit(const Deal& deal, double bid, int expected_visits,
                            const WinModel& win, const PaymentModel& pay,
                            const TailSettings& tail) {
  return expected_profit(deal, Position::fresh(deal, expected_visits), bid, win, pay, tail);
}

double static_optimal_bid(const Deal& deal, const WinModel& win, const PaymentModel& pay) {
  const BidBounds b = win.bounds();
  const double value = deal.pay_per_click * deal.ctr;
  if (!(value > 0.0) || !win.samples_bids()) return b.lo;

  const BidBounds search{b.lo, std::max(b.hi, value)};
  auto objective = [&](double bid) { return win.win_probability(bid) * (value - pay.payment(bid)); };

  // Coarse grid to pick the basin, then Brent inside the neighbouring cells.
  constexpr int kGrid = 256;
  const double step = search.width() / kGrid;
  int best = 0;
  double best_value = objective(search.lo);
  for (int i = 1; i <= kGrid; ++i) {
    const double v = objective(search.lo + i * step);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  const double center = search.lo + best * step;
  const BidBounds local{std::max(search.lo, center - step), std::min(search.hi, center + step)};
  const auto refined = brent_maximize(objective, local, center, search.width() * 1e-9, 200);
  return refined.value >= best_value ? refined.bid : center;
}

}  // namespace dealbid
