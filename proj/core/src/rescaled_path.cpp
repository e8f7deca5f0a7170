#include "loclim/rescaled_path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace loclim {

RescaledPath build_rescaled_path(const ReturnRecord& record) {
  if (record.horizon < 2)
    throw std::invalid_argument("rescaled path needs horizon >= 2 (log of the horizon must be positive)");

  RescaledPath path;
  path.horizon = record.horizon;
  path.log_horizon = std::log(static_cast<double>(record.horizon));
  const double inv_log = 1.0 / path.log_horizon;
  const auto at = [&](std::uint64_t k) { return std::log(static_cast<double>(k)) * inv_log; };

  path.breakpoints.push_back({0.0, 0.0});
  std::uint64_t prev_k = 1;
  std::uint64_t visits = 0;
  for (std::uint64_t r : record.returns) {
    if (r > record.horizon) throw std::invalid_argument("visit time beyond the record horizon");
    if (r - 1 > prev_k) path.breakpoints.push_back({at(r - 1), visits * inv_log});
    ++visits;
    path.breakpoints.push_back({at(r), visits * inv_log});
    prev_k = r;
  }
  if (prev_k < record.horizon) path.breakpoints.push_back({1.0, visits * inv_log});
  return path;
}

double eval_path(const RescaledPath& path, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("eval_path: t must lie in [0, 1]");
  const auto& pts = path.breakpoints;
  if (t <= pts.front().t) return pts.front().value;
  if (t >= pts.back().t) return pts.back().value;
  auto it = std::upper_bound(pts.begin(), pts.end(), t,
                             [](double v, const PathPoint& p) { return v < p.t; });
  const PathPoint& hi = *it;
  const PathPoint& lo = *(it - 1);
  if (hi.t == lo.t) return hi.value;
  const double w = (t - lo.t) / (hi.t - lo.t);
  return lo.value + w * (hi.value - lo.value);
}

double path_increment(const RescaledPath& path, double s, double t) {
  if (s > t) throw std::invalid_argument("path_increment: needs s <= t");
  return std::max(0.0, eval_path(path, t) - eval_path(path, s));
}

}  // namespace loclim
