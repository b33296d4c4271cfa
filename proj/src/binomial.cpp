#include "dealbid/binomial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dealbid/normal.hpp"

namespace dealbid {

namespace {

// log(n!) - log(sqrt(2 pi n) (n/e)^n)
double stirlerr(double n) {
  static constexpr std::array<double, 16> table = {
      0.0,
      0.081061466795327258,
      0.041340695955409294,
      0.027677925684998339,
      0.020790672103765093,
      0.016644691189821192,
      0.013876128823070748,
      0.011896709945891770,
      0.010411265261972096,
      0.009255462182712733,
      0.008330563433362871,
      0.007573675487951841,
      0.006942840107209530,
      0.006408994188004207,
      0.005951370112758848,
      0.005554733551962801,
  };
  constexpr double s0 = 1.0 / 12.0;
  constexpr double s1 = 1.0 / 360.0;
  constexpr double s2 = 1.0 / 1260.0;
  constexpr double s3 = 1.0 / 1680.0;
  constexpr double s4 = 1.0 / 1188.0;
  if (n <= 15.0) return table[static_cast<std::size_t>(n)];
  const double nn = n * n;
  if (n > 500) return (s0 - s1 / nn) / n;
  if (n > 80) return (s0 - (s1 - s2 / nn) / nn) / n;
  if (n > 35) return (s0 - (s1 - (s2 - s3 / nn) / nn) / nn) / n;
  return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n;
}

// Deviance term x log(x/np) + np - x, evaluated without cancellation.
double bd0(double x, double np) {
  if (std::fabs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
    return s;
  }
  return x * std::log(x / np) + np - x;
}

constexpr double kStopRatio = 1e-18;

}  // namespace

double binomial_pmf(int k, int n, double p) {
  if (k < 0 || k > n || n < 0) return 0.0;
  const double q = 1.0 - p;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (q <= 0.0) return k == n ? 1.0 : 0.0;
  const double dn = n;
  if (k == 0) {
    if (n == 0) return 1.0;
    const double lc = p < 0.1 ? -bd0(dn, dn * q) - dn * p : dn * std::log(q);
    return std::exp(lc);
  }
  if (k == n) {
    const double lc = q < 0.1 ? -bd0(dn, dn * p) - dn * q : dn * std::log(p);
    return std::exp(lc);
  }
  const double dk = k;
  const double lc =
      stirlerr(dn) - stirlerr(dk) - stirlerr(dn - dk) - bd0(dk, dn * p) - bd0(dn - dk, dn * q);
  const double lf = std::log(2.0 * std::numbers::pi) + std::log(dk) + std::log1p(-dk / dn);
  return std::exp(lc - 0.5 * lf);
}

RangeMoments binomial_range(int u, double p, int a, int b) {
  a = std::max(a, 0);
  b = std::min(b, u);
  RangeMoments out;
  if (a > b) return out;
  if (p <= 0.0) {
    if (a == 0) out.mass = 1.0;
    return out;
  }
  if (p >= 1.0) {
    if (b == u) {
      out.mass = 1.0;
      out.first = u;
    }
    return out;
  }

  // Anchor at the largest term in range; terms fall off monotonically away
  // from it, so the recurrences below only ever shrink and stop early once
  // further terms cannot change the sums.
  const int mode = std::clamp(static_cast<int>(std::floor((u + 1.0) * p)), 0, u);
  const int k = std::clamp(mode, a, b);
  const double anchor = binomial_pmf(k, u, p);
  if (anchor == 0.0) return out;

  const double odds = p / (1.0 - p);
  double mass = anchor;
  double first = k * anchor;

  double t = anchor;
  for (int j = k; j < b; ++j) {
    t *= (static_cast<double>(u - j) / (j + 1)) * odds;
    mass += t;
    first += (j + 1) * t;
    if (t <= kStopRatio * mass && (j + 1) * t <= kStopRatio * first) break;
  }
  t = anchor;
  for (int j = k; j > a; --j) {
    t *= (static_cast<double>(j) / (u - j + 1)) / odds;
    mass += t;
    first += (j - 1) * t;
    if (t <= kStopRatio * mass) break;
  }
  out.mass = mass;
  out.first = first;
  return out;
}

TailMode resolve_mode(int u, double p, const TailSettings& settings) {
  if (settings.mode != TailMode::automatic) return settings.mode;
  const double variance = u * p * (1.0 - p);
  return variance >= settings.normal_min_variance ? TailMode::normal : TailMode::tail;
}

namespace {

// Cases every mode agrees on exactly. Returns true when handled.
bool degenerate(int r, int u, double p, double& phi_out, double& theta_out) {
  if (r <= 0) {
    phi_out = 1.0;
    theta_out = u * std::clamp(p, 0.0, 1.0);
    return true;
  }
  if (r > u || p <= 0.0) {
    phi_out = 0.0;
    theta_out = 0.0;
    return true;
  }
  if (p >= 1.0) {
    phi_out = 1.0;
    theta_out = u;
    return true;
  }
  return false;
}

struct NormalTail {
  double sigma;
  double z0;
};

NormalTail normal_tail(int r, int u, double p) {
  const double mean = u * p;
  const double sigma = std::sqrt(mean * (1.0 - p));
  return {sigma, (r - 0.5 - mean) / sigma};
}

}  // namespace

double phi(int r, int u, double p, const TailSettings& settings) {
  double ph = 0.0;
  double th = 0.0;
  if (degenerate(r, u, p, ph, th)) return ph;
  switch (resolve_mode(u, p, settings)) {
    case TailMode::exact:
      return std::min(1.0, binomial_range(u, p, r, u).mass);
    case TailMode::normal:
      return normal_sf(normal_tail(r, u, p).z0);
    default:
      return std::clamp(1.0 - binomial_range(u, p, 0, r - 1).mass, 0.0, 1.0);
  }
}

double phi(int r, int u, double p, TailMode mode) {
  TailSettings s;
  s.mode = mode;
  return phi(r, u, p, s);
}

double theta(int r, int u, double p, const TailSettings& settings) {
  double ph = 0.0;
  double th = 0.0;
  if (degenerate(r, u, p, ph, th)) return th;
  const double mean = u * p;
  switch (resolve_mode(u, p, settings)) {
    case TailMode::exact:
      return std::min(mean, binomial_range(u, p, r, u).first);
    case TailMode::normal: {
      const auto [sigma, z0] = normal_tail(r, u, p);
      if (settings.printed_theta_form) return sigma * normal_pdf(z0) + mean;
      return sigma * normal_pdf(z0) + mean * normal_sf(z0);
    }
    default:
      return std::clamp(mean - binomial_range(u, p, 0, r - 1).first, 0.0, mean);
  }
}

double theta(int r, int u, double p, TailMode mode) {
  TailSettings s;
  s.mode = mode;
  return theta(r, u, p, s);
}

std::string_view to_string(TailMode m) {
  switch (m) {
    case TailMode::exact:
      return "exact";
    case TailMode::tail:
      return "tail";
    case TailMode::normal:
      return "normal";
    case TailMode::automatic:
      break;
  }
  return "automatic";
}

TailMode parse_tail_mode(std::string_view name) {
  for (TailMode m : {TailMode::exact, TailMode::tail, TailMode::normal, TailMode::automatic}) {
    if (name == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown tail mode '" + std::string(name) +
                              "' (expected exact, tail, normal or automatic)");
}

}  // namespace dealbid
