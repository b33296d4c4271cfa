#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dealbid/rng.hpp"

namespace dealbid {

/// Interval the optimal bid is searched in.
struct BidBounds {
  double lo = 0.0;
  double hi = 1.0;

  double width() const { return hi - lo; }
  bool contains(double b) const { return b >= lo && b <= hi; }
};

struct UniformBids {
  double lo;
  double hi;
  int n_bidders;  // all bidders, including the one being modelled
};

struct GaussianBids {
  double mean;
  double sigma;
  int n_bidders;
};

struct ConstantWin {
  double p;
};

class InvalidModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Maps a bid to the probability of winning a sealed-bid, highest-bid-wins
/// auction: d(b) = F(b)^(n-1), with F the competitors' common bid CDF.
/// Immutable once constructed; parameters are validated by the factories.
class WinModel {
 public:
  using Variant = std::variant<UniformBids, GaussianBids, ConstantWin>;

  static WinModel uniform(double lo, double hi, int n_bidders);
  static WinModel gaussian(double mean, double sigma, int n_bidders);
  static WinModel constant(double p);

  const Variant& variant() const { return v_; }
  bool samples_bids() const { return !std::holds_alternative<ConstantWin>(v_); }

  /// d(bid). Negative bids are treated as zero.
  double win_probability(double bid) const;

  /// Competitors sampled per auction (n_bidders - 1); zero for the constant model.
  int competitor_count() const;

  /// Search interval for optimal bids. Uniform: the competitor support.
  /// Gaussian: mean +- 6 sigma, floored at zero. Constant: [0, 1]; any bid wins
  /// with the same probability, so the optimum sits at 0 regardless.
  BidBounds bounds() const;

  /// One draw from the single-competitor bid distribution. Gaussian draws are
  /// clamped at zero. Throws InvalidModel for the constant variant.
  double sample_bid(Rng& rng) const;

  /// competitor_count() i.i.d. draws.
  std::vector<double> sample_competitor_bids(Rng& rng) const;

  std::string describe() const;

 private:
  explicit WinModel(Variant v) : v_(v) {}
  Variant v_;
};

/// Maps a winning bid to the amount paid. Only first-price ships.
class PaymentModel {
 public:
  enum class Kind { first_price };

  static PaymentModel first_price() { return PaymentModel(Kind::first_price); }

  Kind kind() const { return kind_; }
  double payment(double bid) const { return bid; }

 private:
  explicit PaymentModel(Kind k) : kind_(k) {}
  Kind kind_;
};

/// The bidders actually present in a simulated auction. May differ from the
/// WinModel a strategy assumes (robustness runs). Each group contributes its
/// model's competitor_count() bidders.
class CompetitorField {
 public:
  CompetitorField() = default;
  explicit CompetitorField(std::vector<WinModel> groups);
  static CompetitorField matching(const WinModel& assumed) { return CompetitorField({assumed}); }

  int size() const { return size_; }
  const std::vector<WinModel>& groups() const { return groups_; }

  /// Highest competing bid and how many competitors share it.
  struct Draw {
    double max_bid = 0.0;
    int at_max = 0;
    double tie_coin = 0.0;  // uniform on [0,1), resolves ties with our bid
  };
  Draw draw(Rng& rng) const;

 private:
  std::vector<WinModel> groups_;
  int size_ = 0;
};

/// Outcome of our bid against a competitor draw. Ties are split uniformly.
inline bool wins_auction(double bid, const CompetitorField::Draw& d) {
  if (d.at_max == 0) return true;
  if (bid > d.max_bid) return true;
  if (bid < d.max_bid) return false;
  return d.tie_coin * (d.at_max + 1) < 1.0;
}

}  // namespace dealbid
