#pragma once

#include <string_view>

namespace dealbid {

/// How the binomial tail sums Phi and Theta are evaluated.
///  exact     - sum the pmf over j = r..u.
///  tail      - complement form: 1 - sum_{j<r} (Phi), u*p - sum_{j<r} j*pmf (Theta).
///  normal    - continuity-corrected normal approximation.
///  automatic - normal when u*p*(1-p) >= normal_min_variance, tail otherwise.
enum class TailMode { exact, tail, normal, automatic };
std::string_view to_string(TailMode m);
/// Inverse of to_string; throws std::invalid_argument on an unknown name.
TailMode parse_tail_mode(std::string_view name);

/// Variance at which the automatic mode switches to the normal approximation.
/// At variance 10 the continuity-corrected approximation is off by up to 0.021
/// in Phi; 50 keeps the worst case under 0.01.
inline constexpr double kDefaultNormalMinVariance = 50.0;

struct TailSettings {
  TailMode mode = TailMode::automatic;
  double normal_min_variance = kDefaultNormalMinVariance;
  // Evaluate Theta's normal form as sigma*pdf(z0) + u*p, without the upper-tail
  // factor on the mean term. Comparison only; it overestimates.
  bool printed_theta_form = false;
};

/// Binomial pmf P(Bin(n, p) = k), saddle-point form (Loader 2000); accurate
/// to a few ulps for n in the millions. Zero outside 0 <= k <= n.
double binomial_pmf(int k, int n, double p);

/// Sum of pmf and of j*pmf over j in [a, b] for Bin(u, p).
struct RangeMoments {
  double mass = 0.0;
  double first = 0.0;
};
RangeMoments binomial_range(int u, double p, int a, int b);

/// Phi(r, u, p) = P(Bin(u, p) >= r). r <= 0 gives 1.
double phi(int r, int u, double p, const TailSettings& settings = {});
double phi(int r, int u, double p, TailMode mode);

/// Theta(r, u, p) = E[J ; J >= r] for J ~ Bin(u, p).
double theta(int r, int u, double p, const TailSettings& settings = {});
double theta(int r, int u, double p, TailMode mode);

/// The mode `settings` resolves to for these arguments (never automatic).
TailMode resolve_mode(int u, double p, const TailSettings& settings);

}  // namespace dealbid
