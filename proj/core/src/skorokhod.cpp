#include "loclim/skorokhod.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "loclim/limit_process.hpp"
#include "loclim/rescaled_path.hpp"

namespace loclim {

PiecewiseLinear as_piecewise_linear(const RescaledPath& path) {
  PiecewiseLinear f;
  f.vertices.reserve(path.breakpoints.size());
  for (const PathPoint& p : path.breakpoints) f.vertices.push_back({p.t, p.value});
  return f;
}

StepFunction as_step_function(const LimitGridSample& sample) {
  StepFunction f;
  double prev = 0.0;
  for (std::size_t i = 0; i < sample.grid.size(); ++i) {
    if (sample.values[i] != prev) {
      f.jumps.push_back({sample.grid[i], sample.values[i]});
      prev = sample.values[i];
    }
  }
  return f;
}
namespace {

double chebyshev(PlanarPoint a, PlanarPoint b) {
  return std::max(std::abs(a.t - b.t), std::abs(a.value - b.value));
}

void push_vertex(std::vector<PlanarPoint>& vs, PlanarPoint p) {
  if (!vs.empty() && vs.back().t == p.t && vs.back().value == p.value) return;
  vs.push_back(p);
}

void check_vertices(const std::vector<PlanarPoint>& vs, bool strictly_increasing_t) {
  if (vs.empty()) throw std::invalid_argument("path needs at least one vertex");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (!(vs[i].t >= 0.0 && vs[i].t <= 1.0) || !std::isfinite(vs[i].value))
      throw std::invalid_argument("path vertices must have t in [0, 1] and finite values");
    if (i == 0) continue;
    const bool t_ok = strictly_increasing_t ? vs[i].t > vs[i - 1].t : vs[i].t >= vs[i - 1].t;
    if (!t_ok || vs[i].value < vs[i - 1].value)
      throw std::invalid_argument("path vertices must be ordered in t with nondecreasing values");
  }
}

}  // namespace

double PiecewiseLinear::eval(double t) const {
  if (vertices.empty()) throw std::invalid_argument("eval of an empty path");
  if (t <= vertices.front().t) return vertices.front().value;
  if (t >= vertices.back().t) return vertices.back().value;
  auto it = std::upper_bound(vertices.begin(), vertices.end(), t,
                             [](double v, const PlanarPoint& p) { return v < p.t; });
  const PlanarPoint& hi = *it;
  const PlanarPoint& lo = *(it - 1);
  const double w = (t - lo.t) / (hi.t - lo.t);
  return lo.value + w * (hi.value - lo.value);
}

double StepFunction::eval(double t) const {
  auto it = std::upper_bound(jumps.begin(), jumps.end(), t,
                             [](double v, const PlanarPoint& p) { return v < p.t; });
  return it == jumps.begin() ? initial : (it - 1)->value;
}

StepFunction StepFunction::unit_step(double a) {
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("unit_step: jump time must lie in (0, 1]");
  StepFunction f;
  f.jumps.push_back({a, 1.0});
  return f;
}

StepFunction StepFunction::staircase(double start, double width, std::size_t count) {
  if (count == 0) throw std::invalid_argument("staircase: needs at least one riser");
  if (!(width > 0.0) || !(start >= 0.0) || !(start + width <= 1.0))
    throw std::invalid_argument("staircase: window must fit inside [0, 1]");
  StepFunction f;
  const double dv = 1.0 / static_cast<double>(count);
  const double dt = width / static_cast<double>(count);
  for (std::size_t i = 1; i <= count; ++i)
    f.jumps.push_back({start + static_cast<double>(i) * dt, static_cast<double>(i) * dv});
  return f;
}

double eval_path(const MonotonePath& path, double t) {
  return std::visit([t](const auto& f) { return f.eval(t); }, path);
}

Polyline completed_graph(const PiecewiseLinear& f) {
  check_vertices(f.vertices, true);
  Polyline g;
  if (f.vertices.front().t > 0.0) push_vertex(g.vertices, {0.0, f.vertices.front().value});
  for (const PlanarPoint& p : f.vertices) push_vertex(g.vertices, p);
  if (f.vertices.back().t < 1.0) push_vertex(g.vertices, {1.0, f.vertices.back().value});
  if (g.vertices.size() < 2) push_vertex(g.vertices, {1.0, g.vertices.front().value});
  return g;
}

Polyline completed_graph(const StepFunction& f) {
  check_vertices(f.jumps.empty() ? std::vector<PlanarPoint>{{0.0, f.initial}} : f.jumps, true);
  if (!f.jumps.empty()) {
    if (!(f.jumps.front().t > 0.0))
      throw std::invalid_argument("step function jump times must lie in (0, 1]");
    if (f.jumps.front().value < f.initial)
      throw std::invalid_argument("step function values must be nondecreasing");
  }
  Polyline g;
  push_vertex(g.vertices, {0.0, f.initial});
  double value = f.initial;
  for (const PlanarPoint& j : f.jumps) {
    push_vertex(g.vertices, {j.t, value});   // approach along the flat
    push_vertex(g.vertices, {j.t, j.value});  // vertical bridge across the jump
    value = j.value;
  }
  push_vertex(g.vertices, {1.0, value});
  return g;
}

Polyline completed_graph(const MonotonePath& path) {
  return std::visit([](const auto& f) { return completed_graph(f); }, path);
}

namespace {

std::vector<PlanarPoint> densify(const Polyline& p, double resolution, std::size_t max_vertices) {
  check_vertices(p.vertices, false);
  if (p.vertices.size() < 2) throw std::invalid_argument("polyline needs at least two vertices");
  std::vector<PlanarPoint> out;
  for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
    const PlanarPoint a = p.vertices[i];
    const PlanarPoint b = p.vertices[i + 1];
    const double len = chebyshev(a, b);
    const auto pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / resolution)));
    for (std::size_t k = 0; k < pieces; ++k) {
      const double w = static_cast<double>(k) / static_cast<double>(pieces);
      out.push_back({a.t + w * (b.t - a.t), a.value + w * (b.value - a.value)});
      if (out.size() > max_vertices)
        throw std::length_error("frechet_distance: densified polyline exceeds the vertex budget");
    }
  }
  out.push_back(p.vertices.back());
  return out;
}

double discrete_frechet(const std::vector<PlanarPoint>& a, const std::vector<PlanarPoint>& b) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<double> prev(m), cur(m);
  prev[0] = chebyshev(a[0], b[0]);
  for (std::size_t j = 1; j < m; ++j) prev[j] = std::max(prev[j - 1], chebyshev(a[0], b[j]));
  for (std::size_t i = 1; i < n; ++i) {
    cur[0] = std::max(prev[0], chebyshev(a[i], b[0]));
    for (std::size_t j = 1; j < m; ++j) {
      const double reach = std::min({prev[j], prev[j - 1], cur[j - 1]});
      cur[j] = std::max(reach, chebyshev(a[i], b[j]));
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

}  // namespace

MetricReport frechet_distance(const Polyline& a, const Polyline& b, double resolution,
                              std::size_t max_vertices) {
  if (!(resolution > 0.0) || !std::isfinite(resolution))
    throw std::invalid_argument("frechet_distance: resolution must be positive and finite");
  const auto da = densify(a, resolution, max_vertices);
  const auto db = densify(b, resolution, max_vertices);
  constexpr std::size_t kMaxCells = 200'000'000;
  if (da.size() > kMaxCells / db.size())
    throw std::length_error("frechet_distance: coupling table exceeds the cell budget");
  MetricReport r;
  r.value = discrete_frechet(da, db);
  r.error_bound = resolution;
  r.kind = MetricKind::m1_approx;
  return r;
}

MetricReport m1_distance(const MonotonePath& f, const MonotonePath& g, double resolution) {
  return frechet_distance(completed_graph(f), completed_graph(g), resolution);
}

namespace {

double max_rise_impl(const StepFunction& f, double mesh) {
  double best = 0.0;
  double window_base = f.initial;
  std::size_t lo = 0;
  for (std::size_t j = 0; j < f.jumps.size(); ++j) {
    while (lo < j && f.jumps[lo].t <= f.jumps[j].t - mesh) {
      window_base = f.jumps[lo].value;
      ++lo;
    }
    best = std::max(best, f.jumps[j].value - window_base);
  }
  return best;
}

double max_rise_impl(const PiecewiseLinear& f, double mesh) {
  double best = 0.0;
  for (const PlanarPoint& p : f.vertices) {
    best = std::max(best, f.eval(std::min(1.0, p.t + mesh)) - p.value);
    best = std::max(best, p.value - f.eval(std::max(0.0, p.t - mesh)));
  }
  return best;
}

}  // namespace

double max_rise(const MonotonePath& f, double mesh) {
  if (!(mesh >= 0.0)) throw std::invalid_argument("max_rise: mesh must be nonnegative");
  return std::visit([mesh](const auto& g) { return max_rise_impl(g, mesh); }, f);
}

MetricReport j1_jump_gap_lower_bound(const MonotonePath& f, const MonotonePath& g, double mesh) {
  MetricReport r;
  r.value = std::max(0.0, (max_rise(g, mesh) - max_rise(f, mesh)) / 2.0);
  r.error_bound = 0.0;
  r.kind = MetricKind::j1_lower_bound;
  return r;
}

MetricReport uniform_distance(const MonotonePath& f, const MonotonePath& g,
                              const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("uniform_distance: grid must be nonempty");
  MetricReport r;
  r.kind = MetricKind::uniform;
  for (double t : grid) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("uniform_distance: grid times must lie in [0, 1]");
    r.value = std::max(r.value, std::abs(eval_path(f, t) - eval_path(g, t)));
  }
  return r;
}

}  // namespace loclim
