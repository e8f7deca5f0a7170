#pragma once

#include <optional>
#include <vector>

#include "loclim/rng.hpp"

namespace loclim {

// Sampler for the pure-jump limit: independent increments, value 0 at time 0,
// and over (s, t] the increment is 0 with probability s/t, otherwise
// exponential with mean t/pi.

struct LimitGridSample {
  std::vector<double> grid;    // times in (0, 1], nondecreasing
  std::vector<double> values;  // process values at those times, nondecreasing
};

// One draw of the process on the given grid.  Two uniforms are consumed per
// grid cell (Bernoulli, then inverse-CDF exponential), so draws on a fixed
// grid are reproducible from the stream alone.
LimitGridSample sample_grid(const std::vector<double>& grid, RngStream& stream);

// CDF of the increment over (s, t] evaluated at x.
double increment_cdf(double s, double t, double x);

// Location of the first jump after time t, mapped from a single uniform draw
// u in [0, 1).  Empty with probability t (no further jumps); otherwise a value
// in (t, 1], strictly above t so repeated application always advances.
std::optional<double> first_jump_after(double t, double u);

// Inverse of the conditional first-jump CDF F(x) = (1 - t/x) / (1 - t) on
// (t, 1]: u in [0, 1] maps to t / (1 - (1-t) u).
double conditional_first_jump(double t, double u);

struct JumpTimeSequence {
  double epsilon = 0.0;
  std::vector<double> times;  // strictly increasing, in (epsilon, 1]
};

// All jump times in (epsilon, 1], built by iterating first_jump_after from
// epsilon.  The count is almost surely finite with mean log(1/epsilon).
JumpTimeSequence sample_jump_times(double epsilon, RngStream& stream);

// Time of the last jump before 1; distributed Uniform[0, 1].
double last_jump_time(RngStream& stream);

}  // namespace loclim
