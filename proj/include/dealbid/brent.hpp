#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>

#include "dealbid/win_model.hpp"

namespace dealbid {

using Objective = std::function<double(double)>;

struct ScalarMaximum {
  double bid = 0.0;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
};

/// The objective returned NaN or infinity at `bid()`.
class NonFiniteObjective : public std::runtime_error {
 public:
  explicit NonFiniteObjective(double bid)
      : std::runtime_error("objective is not finite at bid " + std::to_string(bid)), bid_(bid) {}
  double bid() const { return bid_; }

 private:
  double bid_;
};

/// Brent's bounded scalar search (parabolic interpolation with golden-section
/// fallback), run on -f so it climbs to a local maximum. The search starts at
/// `start`, keeps every evaluation inside `bounds`, and stops when the bracket
/// around the incumbent shrinks below ~2*abs_tol or after max_iters steps.
ScalarMaximum brent_maximize(const Objective& f, BidBounds bounds, double start, double abs_tol,
                             int max_iters);

/// Runs brent_maximize from every start and keeps the best result. The two
/// bracket endpoints are scored as well, since Brent only approaches them to
/// within abs_tol. Starts that hit a non-finite value are dropped; throws the
/// last NonFiniteObjective only if no start succeeded.
ScalarMaximum multi_start_maximize(const Objective& f, BidBounds bounds,
                                   std::span<const double> starts, double abs_tol, int max_iters);

}  // namespace dealbid
