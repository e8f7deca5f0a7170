#pragma once

#include <cstddef>
#include <variant>
#include <vector>

namespace loclim {

struct PlanarPoint {
  double t = 0.0;
  double value = 0.0;
};

// Continuous nondecreasing piecewise-linear function on [0, 1], stored by its
// vertices (strictly increasing in t).
struct PiecewiseLinear {
  std::vector<PlanarPoint> vertices;
  double eval(double t) const;
};

// Right-continuous nondecreasing step function on [0, 1] with jump times in
// (0, 1].
struct StepFunction {
  double initial = 0.0;
  std::vector<PlanarPoint> jumps;  // (time, post-jump value)

  double eval(double t) const;
  static StepFunction unit_step(double a);
  // `count` equal risers of height 1/count at spacing width/count, starting
  // just after `start`; climbs 0 to 1 across (start, start + width].
  static StepFunction staircase(double start, double width, std::size_t count);
};

using MonotonePath = std::variant<PiecewiseLinear, StepFunction>;

double eval_path(const MonotonePath& path, double t);

struct RescaledPath;
struct LimitGridSample;

// Adapters into the metric layer.
PiecewiseLinear as_piecewise_linear(const RescaledPath& path);
// Grid sample as the step function that jumps at each grid time where the
// sampled value moved.
StepFunction as_step_function(const LimitGridSample& sample);

// Completed graph: the curve in [0,1] x R obtained by bridging every jump with
// a vertical segment.  Vertices are ordered by (t, value), both nondecreasing.
struct Polyline {
  std::vector<PlanarPoint> vertices;
};

Polyline completed_graph(const PiecewiseLinear& f);
Polyline completed_graph(const StepFunction& f);
Polyline completed_graph(const MonotonePath& path);

enum class MetricKind { m1_approx, j1_lower_bound, uniform };

struct MetricReport {
  double value = 0.0;
  double error_bound = 0.0;  // discretisation slack; 0 for exact reports
  MetricKind kind = MetricKind::m1_approx;
};

inline constexpr std::size_t kDefaultMaxFrechetVertices = 200'000;

// Discrete Frechet distance between the two polylines after densifying every
// edge to pieces no longer than `resolution` (Chebyshev length).  For
// completed graphs of nondecreasing paths this approximates the M1 distance
// to within the reported error_bound.
MetricReport frechet_distance(const Polyline& a, const Polyline& b, double resolution,
                              std::size_t max_vertices = kDefaultMaxFrechetVertices);

MetricReport m1_distance(const MonotonePath& f, const MonotonePath& g, double resolution);

// Largest rise of the path over any time window of width <= mesh.  For a step
// function with mesh below the smallest jump spacing this is the largest jump.
double max_rise(const MonotonePath& f, double mesh);

// (max_rise(g) - max_rise(f)) / 2, clamped at 0: any J1 time change keeps jump
// sizes, so paths whose biggest near-instant rises differ by 2d are at J1
// distance >= d.
MetricReport j1_jump_gap_lower_bound(const MonotonePath& f, const MonotonePath& g, double mesh);

// Sup-norm gap evaluated on a finite grid.
MetricReport uniform_distance(const MonotonePath& f, const MonotonePath& g,
                              const std::vector<double>& grid);

}  // namespace loclim
