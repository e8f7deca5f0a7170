#include "loclim/limit_process.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace loclim {
namespace {

void check_time(double t, const char* what) {
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in (0, 1]");
}

constexpr std::size_t kMaxJumpIterations = 1'000'000;

}  // namespace

LimitGridSample sample_grid(const std::vector<double>& grid, RngStream& stream) {
  if (grid.empty()) throw std::invalid_argument("sample_grid: grid must be nonempty");
  LimitGridSample out;
  out.grid = grid;
  out.values.reserve(grid.size());
  double prev_t = 0.0;
  double value = 0.0;
  for (double t : grid) {
    check_time(t, "grid time");
    if (t < prev_t) throw std::invalid_argument("sample_grid: grid must be nondecreasing");
    const double u = stream.next_unit();
    const double jump = u < prev_t / t ? 0.0 : stream.next_exponential(t / std::numbers::pi);
    value += jump;
    out.values.push_back(value);
    prev_t = t;
  }
  return out;
}

double increment_cdf(double s, double t, double x) {
  if (!(s >= 0.0 && s <= t)) throw std::invalid_argument("increment_cdf: needs 0 <= s <= t");
  check_time(t, "increment_cdf: t");
  if (x < 0.0) return 0.0;
  const double zero_mass = s / t;
  return zero_mass + (1.0 - zero_mass) * (-std::expm1(-std::numbers::pi * x / t));
}

double conditional_first_jump(double t, double u) {
  check_time(t, "conditional_first_jump: t");
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("conditional_first_jump: u must lie in [0, 1]");
  return std::min(1.0, t / (1.0 - (1.0 - t) * u));
}

std::optional<double> first_jump_after(double t, double u) {
  check_time(t, "first_jump_after: t");
  if (!(u >= 0.0 && u < 1.0)) throw std::invalid_argument("first_jump_after: u must lie in [0, 1)");
  if (u < t) return std::nullopt;
  // Map the surviving mass through the complement so the result stays strictly
  // above t (u == t would otherwise land exactly on t).
  const double conditional = 1.0 - (u - t) / (1.0 - t);
  return conditional_first_jump(t, conditional);
}

JumpTimeSequence sample_jump_times(double epsilon, RngStream& stream) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("sample_jump_times: epsilon must lie in (0, 1)");
  JumpTimeSequence seq;
  seq.epsilon = epsilon;
  double t = epsilon;
  for (std::size_t i = 0; i < kMaxJumpIterations; ++i) {
    const auto next = first_jump_after(t, stream.next_unit());
    if (!next) return seq;
    seq.times.push_back(*next);
    t = *next;
  }
  throw std::runtime_error("sample_jump_times: jump iteration failed to terminate");
}

double last_jump_time(RngStream& stream) { return stream.next_unit(); }

}  // namespace loclim
