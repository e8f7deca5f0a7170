#include "loclim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "loclim/limit_process.hpp"

namespace loclim {

ReferenceLaw ReferenceLaw::exp_mean(double mean) {
  if (!(mean > 0.0)) throw std::invalid_argument("exp_mean: mean must be positive");
  return ReferenceLaw(Kind::exp_mean, mean, 0.0);
}

ReferenceLaw ReferenceLaw::uniform01() { return ReferenceLaw(Kind::uniform01, 0.0, 0.0); }

ReferenceLaw ReferenceLaw::reciprocal_uniform() {
  return ReferenceLaw(Kind::reciprocal_uniform, 0.0, 0.0);
}

ReferenceLaw ReferenceLaw::increment_mixture(double s, double t) {
  increment_cdf(s, t, 0.0);  // validates the pair
  return ReferenceLaw(Kind::increment_mixture, s, t);
}

double ReferenceLaw::cdf(double x) const {
  switch (kind_) {
    case Kind::exp_mean:
      return x <= 0.0 ? 0.0 : -std::expm1(-x / a_);
    case Kind::uniform01:
      return std::clamp(x, 0.0, 1.0);
    case Kind::reciprocal_uniform:
      return x <= 1.0 ? 0.0 : 1.0 - 1.0 / x;
    case Kind::increment_mixture:
      return increment_cdf(a_, b_, x);
  }
  return 0.0;
}

double ReferenceLaw::sample(RngStream& stream) const {
  switch (kind_) {
    case Kind::exp_mean:
      return stream.next_exponential(a_);
    case Kind::uniform01:
      return stream.next_unit();
    case Kind::reciprocal_uniform:
      return 1.0 / (1.0 - stream.next_unit());
    case Kind::increment_mixture: {
      const double u = stream.next_unit();
      if (u < a_ / b_) return 0.0;
      return stream.next_exponential(b_ / std::numbers::pi);
    }
  }
  return 0.0;
}

double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Jacobi theta dual form: accurate for small arguments where the
    // alternating series loses digits.
    const double f = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double k_cdf = 0.0;
    for (int j = 1; j < 40; j += 2) {
      const double term = std::exp(-static_cast<double>(j) * j * f);
      k_cdf += term;
      if (term < 1e-16) break;
    }
    k_cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return std::clamp(1.0 - k_cdf, 0.0, 1.0);
  }
  double q = 0.0;
  double sign = 1.0;
  for (int j = 1; j < 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    q += sign * term;
    sign = -sign;
    if (term < 1e-14) break;
  }
  return std::clamp(2.0 * q, 0.0, 1.0);
}

Ecdf::Ecdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw std::invalid_argument("ecdf over an empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

namespace {

KSReport finish_one_sample(double d, std::size_t n) {
  KSReport r;
  r.statistic = d;
  r.n1 = n;
  const double sn = std::sqrt(static_cast<double>(n));
  r.p_value = kolmogorov_tail(sn * d);
  r.band95 = 1.36 / sn;
  return r;
}

}  // namespace

KSReport ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_one_sample over an empty sample");
  std::vector<double> xs(samples.begin(), samples.end());
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, (static_cast<double>(i) + 1.0) / n - f);
    d = std::max(d, f - static_cast<double>(i) / n);
  }
  return finish_one_sample(d, xs.size());
}

KSReport ks_one_sample(std::span<const double> samples, const ReferenceLaw& law) {
  return ks_one_sample(samples, [&law](double x) { return law.cdf(x); });
}

KSReport ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample over an empty sample");
  std::vector<double> xs(a.begin(), a.end());
  std::vector<double> ys(b.begin(), b.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double n = static_cast<double>(xs.size());
  const double m = static_cast<double>(ys.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < xs.size() && j < ys.size()) {
    const double v = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] <= v) ++i;
    while (j < ys.size() && ys[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  KSReport r;
  r.statistic = d;
  r.n1 = xs.size();
  r.n2 = ys.size();
  const double n_eff = n * m / (n + m);
  r.p_value = kolmogorov_tail(std::sqrt(n_eff) * d);
  r.band95 = 1.36 / std::sqrt(n_eff);
  return r;
}

KSReport ks_conditional(std::span<const double> samples, const std::function<double(double)>& cdf,
                        double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("ks_conditional: needs lo < hi");
  const double f_lo = cdf(lo);
  const double f_hi = cdf(hi);
  if (!(f_hi > f_lo)) throw std::invalid_argument("ks_conditional: reference has no mass on the window");
  std::vector<double> xs;
  xs.reserve(samples.size());
  for (double x : samples)
    if (x >= lo && x <= hi) xs.push_back(x);
  if (xs.empty()) throw std::invalid_argument("ks_conditional: no samples in the window");
  const auto conditional = [&](double x) { return (cdf(x) - f_lo) / (f_hi - f_lo); };
  return ks_one_sample(xs, conditional);
}

KSReport ks_sub_law(std::span<const double> samples, const std::function<double(double)>& sub_cdf,
                    double lo, double hi) {
  if (samples.empty()) throw std::invalid_argument("ks_sub_law over an empty sample");
  if (!(lo < hi)) throw std::invalid_argument("ks_sub_law: needs lo < hi");
  std::vector<double> xs(samples.begin(), samples.end());
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  const auto ecdf_at = [&](double x) {
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    return static_cast<double>(it - xs.begin()) / n;
  };
  double d = std::max(std::abs(ecdf_at(lo) - sub_cdf(lo)), std::abs(ecdf_at(hi) - sub_cdf(hi)));
  for (double x : xs) {
    if (x <= lo || x > hi) continue;
    const double g = sub_cdf(x);
    const auto it_hi = std::upper_bound(xs.begin(), xs.end(), x);
    const auto it_lo = std::lower_bound(xs.begin(), xs.end(), x);
    d = std::max(d, std::abs(static_cast<double>(it_hi - xs.begin()) / n - g));
    d = std::max(d, std::abs(g - static_cast<double>(it_lo - xs.begin()) / n));
  }
  KSReport r;
  r.statistic = d;
  r.n1 = samples.size();
  const double sn = std::sqrt(n);
  r.p_value = kolmogorov_tail(sn * d);
  r.band95 = 1.36 / sn;
  return r;
}

double sample_mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of an empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw std::invalid_argument("variance needs at least two samples");
  const double m = sample_mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

double pearson_correlation(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("correlation needs two equal-length samples of size >= 2");
  const double mx = sample_mean(xs);
  const double my = sample_mean(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace loclim
