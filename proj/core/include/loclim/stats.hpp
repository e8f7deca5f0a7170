#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "loclim/rng.hpp"

namespace loclim {

struct KSReport {
  double statistic = 0.0;   // sup-gap D
  std::size_t n1 = 0;       // sample size (first sample)
  std::size_t n2 = 0;       // second sample size, 0 for one-sample tests
  double p_value = 1.0;     // asymptotic Kolmogorov tail probability
  double band95 = 0.0;      // 1.36 / sqrt(effective n)
};

// Reference distributions the experiments test against.
class ReferenceLaw {
 public:
  enum class Kind { exp_mean, uniform01, reciprocal_uniform, increment_mixture };

  static ReferenceLaw exp_mean(double mean);
  static ReferenceLaw uniform01();
  // 1/U for U uniform on (0, 1]: CDF 1 - 1/x on [1, inf).
  static ReferenceLaw reciprocal_uniform();
  // Law of the limit increment over (s, t]: atom at 0 of mass s/t, otherwise
  // exponential with mean t/pi.
  static ReferenceLaw increment_mixture(double s, double t);

  Kind kind() const { return kind_; }
  double cdf(double x) const;
  double sample(RngStream& stream) const;

 private:
  ReferenceLaw(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}
  Kind kind_;
  double a_ = 0.0;
  double b_ = 0.0;
};

// Asymptotic Kolmogorov tail Q(lambda) = P(sup|B| > lambda); series switched
// near lambda ~ 1 for accuracy on both flanks.
double kolmogorov_tail(double lambda);

class Ecdf {
 public:
  explicit Ecdf(std::vector<double> samples);
  double operator()(double x) const;  // P_hat(X <= x)
  const std::vector<double>& sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

KSReport ks_one_sample(std::span<const double> samples, const ReferenceLaw& law);
KSReport ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf);
KSReport ks_two_sample(std::span<const double> a, std::span<const double> b);

// One-sample KS between the conditional law on [lo, hi] and the empirical
// distribution of the in-window samples.  Out-of-window samples (including
// censored ones mapped to +infinity) are dropped; both sides are renormalised
// to the window before taking the sup.
KSReport ks_conditional(std::span<const double> samples, const std::function<double(double)>& cdf,
                        double lo, double hi);

// Sup-gap over (lo, hi] between the raw (defective) empirical CDF of `samples`
// (entries may be +infinity, the denominator is the full count) and `sub_cdf`.
KSReport ks_sub_law(std::span<const double> samples, const std::function<double(double)>& sub_cdf,
                    double lo, double hi);

double sample_mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);  // unbiased
double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

}  // namespace loclim
