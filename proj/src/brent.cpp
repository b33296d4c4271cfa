#include "dealbid/brent.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace dealbid {

namespace {

constexpr double kGolden = 0.3819660112501051;  // (3 - sqrt(5)) / 2
const double kSqrtEps = std::sqrt(2.220446049250313e-16);

}  // namespace

ScalarMaximum brent_maximize(const Objective& f, BidBounds bounds, double start, double abs_tol,
                             int max_iters) {
  if (!(bounds.hi >= bounds.lo)) throw std::invalid_argument("brent_maximize: empty bounds");
  if (!(abs_tol > 0.0)) throw std::invalid_argument("brent_maximize: abs_tol must be positive");

  ScalarMaximum out;
  auto g = [&](double x) {
    ++out.evaluations;
    const double v = f(x);
    if (!std::isfinite(v)) throw NonFiniteObjective(x);
    return -v;
  };

  double a = bounds.lo;
  double b = bounds.hi;
  double x = std::clamp(start, a, b);
  double w = x;
  double v = x;
  double fx = g(x);
  double fw = fx;
  double fv = fx;
  double d = 0.0;
  double e = 0.0;

  for (out.iterations = 0; out.iterations < max_iters; ++out.iterations) {
    const double xm = 0.5 * (a + b);
    const double tol1 = kSqrtEps * std::fabs(x) + abs_tol / 3.0;
    const double tol2 = 2.0 * tol1;
    if (std::fabs(x - xm) <= tol2 - 0.5 * (b - a)) break;

    bool golden = true;
    if (std::fabs(e) > tol1) {
      // Fit a parabola through x, w, v.
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::fabs(q);
      const double e_prev = e;
      e = d;
      if (std::fabs(p) < std::fabs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = xm >= x ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = x >= xm ? a - x : b - x;
      d = kGolden * e;
    }

    double u = std::fabs(d) >= tol1 ? x + d : x + (d >= 0.0 ? tol1 : -tol1);
    u = std::clamp(u, bounds.lo, bounds.hi);
    const double fu = g(u);

    if (fu <= fx) {
      if (u >= x) {
        a = x;
      } else {
        b = x;
      }
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x) {
        a = u;
      } else {
        b = u;
      }
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }

  out.bid = x;
  out.value = -fx;
  return out;
}

ScalarMaximum multi_start_maximize(const Objective& f, BidBounds bounds,
                                   std::span<const double> starts, double abs_tol, int max_iters) {
  if (starts.empty()) throw std::invalid_argument("multi_start_maximize: no starting points");

  std::optional<ScalarMaximum> best;
  int evaluations = 0;
  auto consider = [&](const ScalarMaximum& m) {
    if (!best || m.value > best->value) best = m;
  };

  for (double edge : {bounds.lo, bounds.hi}) {
    ++evaluations;
    const double v = f(edge);
    if (std::isfinite(v)) consider({edge, v, 1, 0});
  }

  std::optional<NonFiniteObjective> last_error;
  bool any_start = false;
  for (double s : starts) {
    try {
      const auto m = brent_maximize(f, bounds, s, abs_tol, max_iters);
      evaluations += m.evaluations;
      consider(m);
      any_start = true;
    } catch (const NonFiniteObjective& err) {
      last_error = err;
    }
  }
  if (!any_start) throw *last_error;

  best->evaluations = evaluations;
  return *best;
}

}  // namespace dealbid
