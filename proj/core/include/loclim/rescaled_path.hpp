#pragma once

#include <cstdint>
#include <vector>

#include "loclim/walk.hpp"

namespace loclim {

struct PathPoint {
  double t = 0.0;
  double value = 0.0;
};

// Log-time rescaling of an origin-visit record: the path takes the value
// N_k / log n at t = log k / log n (k = 1..n) and interpolates linearly in t.
// Only the kinks are stored: the endpoints plus, for each visit time r, the
// points at k = r-1 and k = r.  Nondecreasing in t by construction.
struct RescaledPath {
  std::uint64_t horizon = 0;
  double log_horizon = 0.0;
  std::vector<PathPoint> breakpoints;
};

RescaledPath build_rescaled_path(const ReturnRecord& record);

// Value at t in [0, 1].
double eval_path(const RescaledPath& path, double t);

// eval_path(t) - eval_path(s) for 0 <= s <= t <= 1, clamped at 0 so rounding
// never produces a negative increment.
double path_increment(const RescaledPath& path, double s, double t);

}  // namespace loclim
