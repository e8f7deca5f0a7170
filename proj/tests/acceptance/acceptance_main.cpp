// Acceptance gate: ten numbered criteria, one verdict line each.
// Exit status is the number of failed criteria (0 = all green).
//
// Every tolerance and replica count is pinned here.  Randomness is frozen via
// fixed stream families, so reruns are bit-for-bit repeatable; statistical
// checks were sized so their bands comfortably cover the frozen draws.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "loclim/experiments.hpp"
#include "loclim/limit_process.hpp"
#include "loclim/rescaled_path.hpp"
#include "loclim/rng.hpp"
#include "loclim/skorokhod.hpp"
#include "loclim/stats.hpp"
#include "loclim/walk.hpp"

using namespace loclim;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

bool non_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1]) return false;
  return true;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] >= v[i - 1]) return false;
  return true;
}

std::string join(const std::vector<double>& v, const char* f = "%.4f") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt(f, v[i]);
  }
  return s;
}

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// shared heavy ensembles, computed at most once per process

// 1500 walks at n = 10^8, reduced per truncation horizon.  Serves criteria 5
// (nonzero-increment ladder) and 7 (excursion laws); sharing one ensemble
// keeps the cross-horizon comparisons on common random numbers.
struct BigEnsemble {
  std::vector<std::uint64_t> ns{10'000, 1'000'000, 100'000'000};
  std::vector<double> inc_ks, last_ks, max_ks, dominance;
};

const BigEnsemble& big_ensemble() {
  static const BigEnsemble cached = [] {
    BigEnsemble e;
    const std::uint64_t R = 1500;
    const auto count = e.ns.size();
    std::vector<std::vector<double>> inc(count), last(count), maxex(count);
    std::vector<double> dominated(count, 0.0), conditioned(count, 0.0);
    for (std::uint64_t i = 0; i < R; ++i) {
      const auto rec = simulate_walk_returns(e.ns.back(), RngStream::derived(1000, i));
      for (std::size_t j = 0; j < count; ++j) {
        const std::uint64_t n = e.ns[j];
        const double log_n = std::log(static_cast<double>(n));
        const auto a = static_cast<std::uint64_t>(
            std::floor(std::sqrt(static_cast<double>(n))));
        const auto gain = rec.local_time(n) - rec.local_time(a);
        if (gain > 0) inc[j].push_back(static_cast<double>(gain) / log_n);
        const auto ex = excursion_stats(rec.truncated(n));
        if (ex.last_return == 0) continue;
        conditioned[j] += 1.0;
        last[j].push_back(std::log(static_cast<double>(ex.last_return)) / log_n);
        maxex[j].push_back(std::log(static_cast<double>(ex.max_interior)) / log_n);
        if (static_cast<double>(ex.max_interior) <
            0.9 * static_cast<double>(ex.last_return))
          dominated[j] += 1.0;
      }
    }
    const auto exp_law = ReferenceLaw::exp_mean(1.0 / std::numbers::pi);
    const auto uni = ReferenceLaw::uniform01();
    for (std::size_t j = 0; j < count; ++j) {
      e.inc_ks.push_back(ks_one_sample(inc[j], exp_law).statistic);
      e.last_ks.push_back(ks_one_sample(last[j], uni).statistic);
      e.max_ks.push_back(ks_one_sample(maxex[j], uni).statistic);
      e.dominance.push_back(dominated[j] / conditioned[j]);
    }
    return e;
  }();
  return cached;
}

// 5000 walks at n = 10^6.  Serves criterion 5 (zero-increment frequency) and
// criterion 9 (early-time mass probes), which pin this exact horizon.
struct MillionEnsemble {
  double zero_freq = 0.0;
  std::vector<double> start_mass;  // P(path(delta) >= eta), delta in kDeltas
  std::vector<double> end_mass;    // P(increment over (1-delta, 1] >= eta)
};

constexpr double kDeltas[] = {0.1, 0.01, 0.001};
constexpr double kEta = 0.2;

const MillionEnsemble& million_ensemble() {
  static const MillionEnsemble cached = [] {
    MillionEnsemble e;
    const std::uint64_t R = 5000, n = 1'000'000, a = 1'000;
    std::uint64_t zero = 0;
    double start[3] = {0, 0, 0}, end[3] = {0, 0, 0};
    for (std::uint64_t i = 0; i < R; ++i) {
      const auto rec = simulate_walk_returns(n, RngStream::derived(1005, i));
      if (rec.local_time(n) == rec.local_time(a)) ++zero;
      const auto path = build_rescaled_path(rec);
      for (int d = 0; d < 3; ++d) {
        if (eval_path(path, kDeltas[d]) >= kEta) start[d] += 1.0;
        if (path_increment(path, 1.0 - kDeltas[d], 1.0) >= kEta) end[d] += 1.0;
      }
    }
    e.zero_freq = static_cast<double>(zero) / static_cast<double>(R);
    for (int d = 0; d < 3; ++d) {
      e.start_mass.push_back(start[d] / static_cast<double>(R));
      e.end_mass.push_back(end[d] / static_cast<double>(R));
    }
    return e;
  }();
  return cached;
}

// ---------------------------------------------------------------------------

Outcome criterion_1() {
  Outcome out;
  const std::uint64_t R = 100'000;
  const std::vector<std::uint64_t> ns{2, 4, 6, 8, 10};

  std::vector<ReturnRecord> records;
  records.reserve(R);
  for (std::uint64_t i = 0; i < R; ++i)
    records.push_back(simulate_walk_returns(ns.back(), RngStream::derived(1001, i)));

  double worst_z = 0.0;
  for (std::uint64_t n : ns) {
    const auto pmf = enumerate_local_time_distribution(n);
    std::vector<std::uint64_t> observed(pmf.counts.size(), 0);
    for (const auto& rec : records) ++observed[rec.local_time(n)];
    for (std::size_t k = 0; k < pmf.counts.size(); ++k) {
      const double p = pmf.probability(k);
      const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(R));
      const double z =
          std::abs(static_cast<double>(observed[k]) / static_cast<double>(R) - p) / se;
      worst_z = std::max(worst_z, z);
      if (z > 4.0) {
        out.pass = false;
        out.detail += fmt("pmf atom n=%llu k=%zu off by %.2f sd; ",
                          static_cast<unsigned long long>(n), k, z);
      }
    }
  }

  const auto t0 = Clock::now();
  const auto pmf8 = enumerate_local_time_distribution(8);
  const double enum_secs = elapsed(t0);
  if (enum_secs >= 60.0) {
    out.pass = false;
    out.detail += fmt("enumeration at n=8 took %.1f s (limit 60); ", enum_secs);
  }

  std::uint64_t prev_weighted = 0;
  for (std::uint64_t m = 1; m <= 6; ++m) {
    const auto pmf = enumerate_local_time_distribution(2 * m);
    const std::uint64_t weighted = pmf.weighted_visits();
    const double from_enum = static_cast<double>(weighted - 16 * prev_weighted) *
                             std::ldexp(1.0, -4 * static_cast<int>(m));
    if (exact_return_probability(m) != from_enum) {
      out.pass = false;
      out.detail += fmt("return probability mismatch at m=%llu; ",
                        static_cast<unsigned long long>(m));
    }
    prev_weighted = weighted;
  }

  if (out.pass)
    out.detail = fmt("pmf within 4 sd for n in {2..10} (worst %.2f), "
                     "enumeration(8) %.3f s, return probabilities exact for m <= 6",
                     worst_z, enum_secs);
  return out;
}

Outcome criterion_2() {
  Outcome out;
  const auto t0 = Clock::now();
  const std::uint64_t R = 200'000;
  std::string zs;
  for (std::uint64_t n : {100ULL, 1000ULL, 10000ULL}) {
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t i = 0; i < R; ++i) {
      const auto v = static_cast<double>(
          simulate_walk_returns(n, RngStream::derived(1002 + n, i)).local_time());
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / static_cast<double>(R);
    const double se = std::sqrt((sumsq / static_cast<double>(R) - mean * mean) /
                                static_cast<double>(R));
    const double z = (mean - exact_mean_local_time(n)) / se;
    zs += fmt("%s%.2f", zs.empty() ? "" : ", ", z);
    if (std::abs(z) > 3.0) {
      out.pass = false;
      out.detail +=
          fmt("mean at n=%llu off by %.2f se; ", static_cast<unsigned long long>(n), z);
    }
  }
  const double secs = elapsed(t0);
  if (secs >= 30.0) {
    out.pass = false;
    out.detail += fmt("took %.1f s (limit 30); ", secs);
  }
  if (out.pass)
    out.detail = fmt("mean local time z = {%s} within 3 se, %.1f s", zs.c_str(), secs);
  return out;
}

Outcome criterion_3() {
  Outcome out;
  const std::uint64_t R = 5000;
  const std::vector<std::uint64_t> ns{1'000, 100'000, 10'000'000};
  std::vector<std::vector<double>> scaled(ns.size());
  for (std::uint64_t i = 0; i < R; ++i) {
    const auto rec = simulate_walk_returns(ns.back(), RngStream::derived(1003, i));
    for (std::size_t j = 0; j < ns.size(); ++j)
      scaled[j].push_back(static_cast<double>(rec.local_time(ns[j])) /
                          std::log(static_cast<double>(ns[j])));
  }
  const auto law = ReferenceLaw::exp_mean(1.0 / std::numbers::pi);
  std::vector<double> ks;
  for (auto& s : scaled) ks.push_back(ks_one_sample(s, law).statistic);

  out.pass = strictly_decreasing(ks) && ks.back() <= 0.20;
  out.detail = fmt("KS vs Exp(1/pi) = {%s} over n = {1e3, 1e5, 1e7}; need strict "
                   "decrease and final <= 0.20",
                   join(ks).c_str());
  return out;
}

Outcome criterion_4() {
  Outcome out;
  const std::uint64_t R = 100'000;

  std::string bands;
  for (int ti = 0; ti < 3; ++ti) {
    constexpr double kTs[] = {0.1, 0.5, 0.9};
    const double t = kTs[ti];
    auto stream = RngStream::derived(2004, static_cast<std::uint64_t>(ti));
    std::vector<double> kept;
    kept.reserve(R);
    while (kept.size() < R)  // conditional law: draw until a jump exists
      if (const auto x = first_jump_after(t, stream.next_unit())) kept.push_back(*x);
    const auto rep = ks_one_sample(
        kept, [t](double x) { return x <= t ? 0.0 : (1.0 - t / x) / (1.0 - t); });
    bands += fmt("%st=%.1f: %.4f/%.4f", ti ? ", " : "", t, rep.statistic, rep.band95);
    if (rep.statistic > rep.band95) {
      out.pass = false;
      out.detail += fmt("first-jump law at t=%.1f outside the band (D=%.4f > %.4f); ",
                        t, rep.statistic, rep.band95);
    }
  }

  auto lstream = RngStream::derived(2004, 10);
  std::vector<double> lasts(R);
  for (auto& x : lasts) x = last_jump_time(lstream);
  const auto lrep = ks_one_sample(lasts, ReferenceLaw::uniform01());
  if (lrep.statistic > lrep.band95) {
    out.pass = false;
    out.detail += fmt("last-jump uniformity outside the band (D=%.4f > %.4f); ",
                      lrep.statistic, lrep.band95);
  }

  std::vector<double> coarse_grid, fine_grid;
  for (int i = 1; i <= 10; ++i) coarse_grid.push_back(i / 10.0);
  for (int i = 1; i <= 20; ++i) fine_grid.push_back(i / 20.0);
  auto cs = RngStream::derived(2004, 20);
  auto fs = RngStream::derived(2004, 21);
  std::vector<double> coarse(R), fine(R);
  for (std::uint64_t i = 0; i < R; ++i) {
    coarse[i] = sample_grid(coarse_grid, cs).values.back();
    fine[i] = sample_grid(fine_grid, fs).values.back();
  }
  const auto two = ks_two_sample(coarse, fine);
  if (two.p_value <= 0.01) {
    out.pass = false;
    out.detail += fmt("grid refinement two-sample p=%.4f <= 0.01; ", two.p_value);
  }

  auto js = RngStream::derived(2004, 22);
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t i = 0; i < R; ++i) {
    const auto c = static_cast<double>(sample_jump_times(0.01, js).times.size());
    sum += c;
    sumsq += c * c;
  }
  const double mean = sum / static_cast<double>(R);
  const double se =
      std::sqrt((sumsq / static_cast<double>(R) - mean * mean) / static_cast<double>(R));
  const double z = (mean - std::log(100.0)) / se;
  if (std::abs(z) > 3.0) {
    out.pass = false;
    out.detail += fmt("jump count mean %.4f off ln(100) by %.2f se; ", mean, z);
  }

  if (out.pass)
    out.detail = fmt("first-jump D/band {%s}; last-jump D=%.4f <= %.4f; refinement "
                     "p=%.3f; jump count z=%.2f",
                     bands.c_str(), lrep.statistic, lrep.band95, two.p_value, z);
  return out;
}

Outcome criterion_5() {
  Outcome out;
  const auto& m = million_ensemble();
  const auto& big = big_ensemble();

  const bool freq_ok = std::abs(m.zero_freq - 0.5) <= 0.05;
  const bool ladder_ok = non_increasing(big.inc_ks);
  out.pass = freq_ok && ladder_ok;
  out.detail = fmt("zero-increment frequency %.4f (required 0.5 +- 0.05)%s; nonzero "
                   "KS ladder {%s} over n = {1e4, 1e6, 1e8}%s",
                   m.zero_freq, freq_ok ? "" : " MISSED",
                   join(big.inc_ks).c_str(), ladder_ok ? "" : " NOT DECREASING");
  if (!freq_ok)
    out.detail += "; the frequency sits ~0.09 above the asymptotic value 0.5 at "
                  "n=1e6 and the gap shrinks like 1/log n, so the required band "
                  "cannot be met at this pinned horizon";
  return out;
}

Outcome criterion_6() {
  Outcome out;
  const std::uint64_t cap = 100'000'000;
  const double log_cap = std::log(static_cast<double>(cap));
  const std::vector<std::uint64_t> radii{10, 100, 1000};
  const std::vector<std::uint64_t> reps{1000, 1000, 2500};
  const auto law = ReferenceLaw::reciprocal_uniform();

  std::vector<double> ks;
  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    const auto r = radii[ri];
    const double two_log_r = 2.0 * std::log(static_cast<double>(r));
    std::vector<double> stats;
    for (std::uint64_t i = 0; i < reps[ri]; ++i) {
      const auto hit = simulate_hitting_time({static_cast<std::int64_t>(r), 0}, cap,
                                             RngStream::derived(1006 + ri, i));
      stats.push_back(hit.hit() ? std::log(static_cast<double>(*hit.hit_time)) / two_log_r
                                : kInf);
    }
    ks.push_back(ks_sub_law(
                     stats, [&law](double x) { return law.cdf(x); }, 1.0,
                     log_cap / two_log_r)
                     .statistic);
  }

  out.pass = non_increasing(ks) && ks.back() <= 0.10;
  out.detail = fmt("censored KS vs 1 - 1/x = {%s} over r = {10, 100, 1000}, cap 1e8; "
                   "need decrease and final <= 0.10",
                   join(ks).c_str());
  return out;
}

Outcome criterion_7() {
  Outcome out;
  const auto& big = big_ensemble();
  const bool trend =
      non_increasing(big.last_ks) && non_increasing(big.max_ks);
  const bool final_ok = big.last_ks.back() <= 0.15 && big.max_ks.back() <= 0.15;
  const bool dom_ok = non_increasing(big.dominance);
  out.pass = trend && final_ok && dom_ok;
  out.detail = fmt("KS vs U[0,1]: last return {%s}, longest excursion {%s} (final <= "
                   "0.15); dominance probe {%s}%s",
                   join(big.last_ks).c_str(), join(big.max_ks).c_str(),
                   join(big.dominance).c_str(),
                   dom_ok ? "" : " NOT DECREASING");
  return out;
}

Outcome criterion_8() {
  Outcome out;
  const auto t0 = Clock::now();
  const double resolution = 1e-3;
  const MonotonePath step_half = StepFunction::unit_step(0.5);
  const MonotonePath stair = StepFunction::staircase(0.5, 0.01, 100);

  const auto m1_stair = m1_distance(step_half, stair, resolution);
  const auto j1_stair = j1_jump_gap_lower_bound(stair, step_half, 1e-5);
  const auto near_pair = m1_distance(StepFunction::unit_step(0.4),
                                     StepFunction::unit_step(0.5), resolution);
  const auto far_pair = m1_distance(StepFunction::unit_step(0.1),
                                    StepFunction::unit_step(0.9), resolution);
  const double secs = elapsed(t0);

  out.detail = fmt("staircase m1 %.4f, j1 bound %.4f, pairs %.4f/%.4f, %.0f ms",
                   m1_stair.value, j1_stair.value, near_pair.value, far_pair.value,
                   secs * 1e3);
  if (m1_stair.value > 0.011 + resolution) {
    out.pass = false;
    out.detail += fmt("; staircase m1 %.4f > 0.012", m1_stair.value);
  }
  if (j1_stair.value < 0.49) {
    out.pass = false;
    out.detail += fmt("; staircase j1 bound %.4f < 0.49", j1_stair.value);
  }
  if (std::abs(near_pair.value - 0.1) > resolution) {
    out.pass = false;
    out.detail += fmt("; steps at 0.4/0.5: m1 %.4f vs required 0.1 +- %.0e",
                      near_pair.value, resolution);
  }
  if (std::abs(far_pair.value - 0.5) > resolution) {
    out.pass = false;
    out.detail += fmt("; steps at 0.1/0.9: m1 %.4f vs required 0.5 +- %.0e "
                      "(the DP is right: the riser corner (0.1, 1) of the first "
                      "graph is at Chebyshev distance 0.8 from the second, and an "
                      "explicit coupling attains 0.8, so 0.5 is not achievable)",
                      far_pair.value, resolution);
  }
  if (secs >= 1.0) {
    out.pass = false;
    out.detail += fmt("; metric block took %.2f s (limit 1)", secs);
  }
  return out;
}

Outcome criterion_9() {
  Outcome out;
  const auto& m = million_ensemble();
  const bool trend = non_increasing(m.start_mass);
  const bool small = m.start_mass.back() <= 0.05;
  out.pass = trend && small;
  out.detail = fmt("P(path(delta) >= 0.2) = {%s} for delta = {0.1, 0.01, 0.001} at "
                   "n=1e6; end-window mass {%s} for reference",
                   join(m.start_mass).c_str(), join(m.end_mass).c_str());
  return out;
}

Outcome criterion_10() {
  Outcome out;
  std::string checked;
  for (const std::string id : {"E2", "E4"}) {
    auto cfg = default_config(id);
    cfg.replicas = 400;
    cfg.master_seed = 99;
    cfg.n_list = {1'000, 10'000};
    RunOptions serial, pooled;
    serial.threads = 1;
    pooled.threads = 4;
    const auto a = run_experiment(cfg, serial);
    const auto b = run_experiment(cfg, pooled);
    if (a.summary_json != b.summary_json) {
      out.pass = false;
      out.detail += id + " summaries differ across thread counts; ";
    }
    checked += (checked.empty() ? "" : ", ") + id;
  }
  if (out.pass)
    out.detail = "byte-identical summaries across --threads {1, 4} for " + checked;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::pair<int, std::function<Outcome()>>> all = {
      {1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4},
      {5, criterion_5}, {6, criterion_6}, {7, criterion_7}, {8, criterion_8},
      {9, criterion_9}, {10, criterion_10},
  };

  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& [id, fn] : all) {
    if (!wanted.empty() &&
        std::find(wanted.begin(), wanted.end(), id) == wanted.end())
      continue;
    const auto t0 = Clock::now();
    const Outcome out = fn();
    std::printf("criterion %2d: %s | %s [%.1f s]\n", id, out.pass ? "PASS" : "FAIL",
                out.detail.c_str(), elapsed(t0));
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures;
}
