#pragma once

// Reference computations for the tests. Written independently of the library:
// long double log-gamma pmfs, brute-force sums and direct simulation.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "dealbid/profit.hpp"

namespace oracle {

// P(Bin(n, p) = k) through lgammal, in long double.
inline long double pmf(int k, int n, long double p) {
  if (k < 0 || k > n) return 0.0L;
  if (p <= 0.0L) return k == 0 ? 1.0L : 0.0L;
  if (p >= 1.0L) return k == n ? 1.0L : 0.0L;
  const long double lc = lgammal(n + 1.0L) - lgammal(k + 1.0L) - lgammal(n - k + 1.0L);
  return expl(lc + k * logl(p) + (n - k) * log1pl(-p));
}

// P(J >= r), summing every term from the top down (small terms first).
inline long double phi(int r, int u, long double p) {
  if (r <= 0) return 1.0L;
  long double s = 0.0L;
  for (int j = u; j >= r; --j) s += pmf(j, u, p);
  return s;
}

// E[J ; J >= r].
inline long double theta(int r, int u, long double p) {
  long double s = 0.0L;
  for (int j = u; j >= std::max(r, 0); --j) s += j * pmf(j, u, p);
  return s;
}

// Expected final profit straight from the definition: sum over the number of
// future clicks J of the payout if the deal tips, minus all spend.
inline long double expected_profit(const dealbid::Deal& deal, const dealbid::Position& pos, double bid,
                                   const dealbid::WinModel& win) {
  const long double d = win.win_probability(bid);
  const long double p = deal.ctr * d;
  const int m = pos.clicks + pos.remaining_clicks;
  long double revenue = 0.0L;
  for (int j = 0; j <= pos.remaining_visits; ++j) {
    const int total = pos.clicks + j;
    if (total >= m) revenue += pmf(j, pos.remaining_visits, p) * deal.pay_per_click * total;
  }
  return revenue - pos.remaining_visits * d * bid - pos.spend;
}

struct MonteCarlo {
  double mean = 0.0;
  double stderr_ = 0.0;
};

// Exact inverse-CDF sampler for Bin(n, p). (libstdc++'s binomial_distribution
// uses an approximate rejection scheme whose mean is off by several standard
// errors at 10^6 draws.)
class BinomialSampler {
 public:
  BinomialSampler(int n, double p) {
    long double acc = 0.0L;
    for (int k = 0; k <= n; ++k) {
      acc += pmf(k, n, p);
      cdf_.push_back(static_cast<double>(acc));
      if (acc >= 1.0L - 1e-18L && k >= n * p) break;
    }
  }
  int operator()(std::mt19937_64& gen) const {
    const double u = std::generate_canonical<double, 64>(gen);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min(static_cast<int>(it - cdf_.begin()), static_cast<int>(cdf_.size()) - 1);
  }

 private:
  std::vector<double> cdf_;
};

// Simulates the remaining visits as Bernoulli win and click draws. Wins are
// Bin(u, d); clicks among wins are Bin(wins, ctr).
inline MonteCarlo simulate_profit(const dealbid::Deal& deal, const dealbid::Position& pos, double bid,
                                  const dealbid::WinModel& win, int trials, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const double d = win.win_probability(bid);
  const BinomialSampler wins_dist(pos.remaining_visits, d);
  std::map<int, BinomialSampler> clicks_dist;
  const int m = pos.clicks + pos.remaining_clicks;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    const int wins = wins_dist(gen);
    auto it = clicks_dist.find(wins);
    if (it == clicks_dist.end()) it = clicks_dist.emplace(wins, BinomialSampler(wins, deal.ctr)).first;
    const int clicks = pos.clicks + it->second(gen);
    const double revenue = clicks >= m ? deal.pay_per_click * clicks : 0.0;
    const double profit = revenue - pos.spend - bid * wins;
    sum += profit;
    sum_sq += profit * profit;
  }
  MonteCarlo mc;
  mc.mean = sum / trials;
  const double var = std::max(0.0, sum_sq / trials - mc.mean * mc.mean);
  mc.stderr_ = std::sqrt(var * trials / (trials - 1.0) / trials);
  return mc;
}

// Marginal value as the difference between winning and losing the next
// impression, with the bid's payment added back. Differenced per outcome of
// the remaining u - 1 visits so tiny values do not cancel away.
inline long double marginal_value(const dealbid::Deal& deal, const dealbid::Position& pos, double bid,
                                  const dealbid::WinModel& win) {
  const int m = pos.clicks + pos.remaining_clicks;
  const int rest = pos.remaining_visits - 1;
  const long double p = deal.ctr * static_cast<long double>(win.win_probability(bid));
  auto payout = [&](int total) { return total >= m ? static_cast<long double>(deal.pay_per_click) * total : 0.0L; };
  // Winning adds a click with probability ctr; losing never does. Spend on the
  // won impression is exactly the bid, which the marginal value adds back.
  long double gain = 0.0L;
  for (int j = rest; j >= 0; --j) {
    const long double w = pmf(j, rest, p);
    gain += w * (payout(pos.clicks + j + 1) - payout(pos.clicks + j));
  }
  return deal.ctr * gain;
}

// Best value of f on an evenly spaced grid of `points` over [lo, hi].
template <typename F>
double grid_max(F&& f, double lo, double hi, int points) {
  double best = f(lo);
  for (int i = 1; i < points; ++i) best = std::max(best, f(lo + (hi - lo) * i / (points - 1)));
  return best;
}

}  // namespace oracle
