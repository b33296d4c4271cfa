#include "dealbid/win_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dealbid/normal.hpp"

namespace dealbid {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

WinModel WinModel::uniform(double lo, double hi, int n_bidders) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
    throw InvalidModel("uniform win model needs finite lo < hi");
  }
  if (lo < 0.0) throw InvalidModel("uniform win model needs lo >= 0");
  if (n_bidders < 1) throw InvalidModel("n_bidders must be positive");
  return WinModel(UniformBids{lo, hi, n_bidders});
}

WinModel WinModel::gaussian(double mean, double sigma, int n_bidders) {
  if (!std::isfinite(mean) || !std::isfinite(sigma) || !(sigma > 0.0)) {
    throw InvalidModel("gaussian win model needs finite mean and sigma > 0");
  }
  if (n_bidders < 1) throw InvalidModel("n_bidders must be positive");
  return WinModel(GaussianBids{mean, sigma, n_bidders});
}

WinModel WinModel::constant(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidModel("constant win probability must lie in [0,1]");
  return WinModel(ConstantWin{p});
}

double WinModel::win_probability(double bid) const {
  bid = std::max(bid, 0.0);
  return std::visit(
      overloaded{
          [bid](const UniformBids& u) {
            const double f = std::clamp((bid - u.lo) / (u.hi - u.lo), 0.0, 1.0);
            return std::pow(f, u.n_bidders - 1);
          },
          [bid](const GaussianBids& g) {
            return std::pow(normal_cdf((bid - g.mean) / g.sigma), g.n_bidders - 1);
          },
          [](const ConstantWin& c) { return c.p; },
      },
      v_);
}

int WinModel::competitor_count() const {
  return std::visit(overloaded{
                        [](const UniformBids& u) { return u.n_bidders - 1; },
                        [](const GaussianBids& g) { return g.n_bidders - 1; },
                        [](const ConstantWin&) { return 0; },
                    },
                    v_);
}

BidBounds WinModel::bounds() const {
  return std::visit(overloaded{
                        [](const UniformBids& u) { return BidBounds{u.lo, u.hi}; },
                        [](const GaussianBids& g) {
                          const double lo = std::max(0.0, g.mean - 6.0 * g.sigma);
                          return BidBounds{lo, std::max(g.mean + 6.0 * g.sigma, lo + g.sigma)};
                        },
                        [](const ConstantWin&) { return BidBounds{0.0, 1.0}; },
                    },
                    v_);
}

double WinModel::sample_bid(Rng& rng) const {
  return std::visit(overloaded{
                        [&rng](const UniformBids& u) { return rng.uniform(u.lo, u.hi); },
                        [&rng](const GaussianBids& g) {
                          return std::max(0.0, rng.normal(g.mean, g.sigma));
                        },
                        [](const ConstantWin&) -> double {
                          throw InvalidModel("constant win model has no bid distribution");
                        },
                    },
                    v_);
}

std::vector<double> WinModel::sample_competitor_bids(Rng& rng) const {
  if (!samples_bids()) throw InvalidModel("constant win model has no bid distribution");
  std::vector<double> bids(static_cast<std::size_t>(competitor_count()));
  for (auto& b : bids) b = sample_bid(rng);
  return bids;
}

std::string WinModel::describe() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&os](const UniformBids& u) {
                   os << "uniform(" << u.lo << "," << u.hi << ",n=" << u.n_bidders << ")";
                 },
                 [&os](const GaussianBids& g) {
                   os << "gaussian(" << g.mean << "," << g.sigma << ",n=" << g.n_bidders << ")";
                 },
                 [&os](const ConstantWin& c) { os << "constant(" << c.p << ")"; },
             },
             v_);
  return os.str();
}

CompetitorField::CompetitorField(std::vector<WinModel> groups) : groups_(std::move(groups)) {
  for (const auto& g : groups_) {
    if (!g.samples_bids()) throw InvalidModel("competitor groups must have a bid distribution");
    size_ += g.competitor_count();
  }
}

CompetitorField::Draw CompetitorField::draw(Rng& rng) const {
  Draw d;
  for (const auto& g : groups_) {
    for (int i = 0; i < g.competitor_count(); ++i) {
      const double b = g.sample_bid(rng);
      if (d.at_max == 0 || b > d.max_bid) {
        d.max_bid = b;
        d.at_max = 1;
      } else if (b == d.max_bid) {
        ++d.at_max;
      }
    }
  }
  // Always consumed, so the stream position does not depend on outcomes.
  d.tie_coin = rng.uniform01();
  return d;
}

}  // namespace dealbid
