#include "loclim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string_view>

#include <json.hpp>

#include "loclim/io.hpp"
#include "loclim/limit_process.hpp"
#include "loclim/parallel.hpp"
#include "loclim/rescaled_path.hpp"
#include "loclim/skorokhod.hpp"
#include "loclim/stats.hpp"
#include "loclim/version.hpp"
#include "loclim/walk.hpp"

namespace loclim {
namespace {

using ojson = nlohmann::ordered_json;

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Streams are derived per (experiment, replica) so distinct experiments run
// from the same master seed stay independent.
std::uint64_t experiment_seed(std::uint64_t master, std::string_view id) {
  return mix64(master + fnv1a(id));
}

// floor(n^e), nudged so that exact integer powers survive the rounding of pow.
std::uint64_t window_floor(std::uint64_t n, double e) {
  const double p = std::pow(static_cast<double>(n), e);
  return static_cast<std::uint64_t>(std::floor(p + 1e-9 * std::max(1.0, p)));
}

void check_n_list(const std::vector<std::uint64_t>& ns) {
  require(!ns.empty(), "n_list must be nonempty");
  std::uint64_t prev = 0;
  for (std::uint64_t n : ns) {
    require(n >= 2, "every horizon must be >= 2");
    require(n > prev, "n_list must be strictly increasing");
    prev = n;
  }
}

std::string brief(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string list_brief(const std::vector<double>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ", ";
    out += brief(vs[i]);
  }
  return out;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

bool non_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1]) return false;
  return true;
}

ojson ks_json(const KSReport& r) {
  ojson j;
  j["statistic"] = r.statistic;
  j["n"] = r.n1;
  if (r.n2 > 0) j["n2"] = r.n2;
  j["p_value"] = r.p_value;
  j["band95"] = r.band95;
  return j;
}

struct GateSet {
  std::vector<GateOutcome> gates;

  void add(std::string name, bool applicable, bool passed, std::string detail) {
    gates.push_back({std::move(name), applicable, passed, std::move(detail)});
  }

  bool all_passed() const {
    for (const auto& g : gates)
      if (g.applicable && !g.passed) return false;
    return true;
  }

  ojson to_json() const {
    ojson arr = ojson::array();
    for (const auto& g : gates) {
      ojson e;
      e["name"] = g.name;
      e["applicable"] = g.applicable;
      e["passed"] = g.passed;
      e["detail"] = g.detail;
      arr.push_back(e);
    }
    return arr;
  }
};

const char* kPlotScript = R"PY(#!/usr/bin/env python3
"""Quick-look plots for one run directory (summary.json + samples.csv)."""
import collections
import csv
import json
import math
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))


def load_samples():
    groups = collections.defaultdict(list)
    path = os.path.join(HERE, "samples.csv")
    if not os.path.exists(path):
        return groups
    with open(path) as fh:
        for row in csv.DictReader(fh):
            groups[row["statistic"]].append(float(row["value"]))
    return groups


def reference_cdf(name, xs, config):
    pi = math.pi
    if name.startswith("local_time_scaled") or name.startswith("limit_value_at_one"):
        return [1.0 - math.exp(-pi * x) for x in xs]
    if name.startswith("local_time_stat"):
        s = config.get("s", 1.0)
        return [1.0 - math.exp(-pi * x / s) for x in xs]
    if name.startswith(("last_return_stat", "max_excursion_stat", "last_jump")):
        return [min(1.0, max(0.0, x)) for x in xs]
    if name.startswith("hitting_stat"):
        return [0.0 if x <= 1.0 else 1.0 - 1.0 / x for x in xs]
    return None


def main():
    with open(os.path.join(HERE, "summary.json")) as fh:
        summary = json.load(fh)
    config = summary.get("config", {})
    groups = load_samples()
    for name, values in sorted(groups.items()):
        values.sort()
        n = len(values)
        ecdf = [(i + 1) / n for i in range(n)]
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.step(values, ecdf, where="post", label="empirical")
        ref = reference_cdf(name, values, config)
        if ref is not None:
            ax.plot(values, ref, "--", label="reference")
        ax.set_title("{}: {} (n={})".format(summary["experiment"], name, n))
        ax.set_xlabel(name)
        ax.set_ylabel("CDF")
        ax.legend()
        fig.tight_layout()
        safe = name.replace("[", "_").replace("]", "").replace("=", "-")
        fig.savefig(os.path.join(HERE, safe + ".png"), dpi=120)
        plt.close(fig)
    print("wrote plots for {} statistics".format(len(groups)))


if __name__ == "__main__":
    main()
)PY";

ExperimentResult finalize(const ExperimentConfig& cfg, ojson config_echo, ojson results,
                          const GateSet& gates, const std::vector<SampleRow>& rows,
                          const RunOptions& opts) {
  ojson summary;
  summary["experiment"] = cfg.id;
  summary["library_version"] = kVersionString;
  summary["config"] = std::move(config_echo);
  summary["results"] = std::move(results);
  summary["gates"] = gates.to_json();
  const bool ok = gates.all_passed();
  summary["check_passed"] = ok;

  ExperimentResult res;
  res.id = cfg.id;
  res.summary_json = summary.dump(2) + "\n";
  res.gates = gates.gates;
  res.check_passed = ok;

  if (!opts.out_dir.empty()) {
    ensure_directory(opts.out_dir);
    write_text_file(opts.out_dir + "/summary.json", res.summary_json);
    write_samples_csv(opts.out_dir + "/samples.csv", rows);
    write_text_file(opts.out_dir + "/plot.py", kPlotScript);
  }
  return res;
}

std::vector<ReturnRecord> simulate_ensemble(std::uint64_t seed_base, std::uint64_t replicas,
                                            std::uint64_t n_max, unsigned threads) {
  std::vector<ReturnRecord> records(replicas);
  for_each_replica(replicas, threads, [&](std::uint64_t i) {
    records[i] = simulate_walk_returns(n_max, RngStream::derived(seed_base, i));
  });
  return records;
}

std::string stat_name(const char* base, const char* key, std::uint64_t v) {
  return std::string(base) + "[" + key + "=" + std::to_string(v) + "]";
}

}  // namespace

ExperimentConfig default_config(const std::string& id) {
  ExperimentConfig cfg;
  cfg.id = id;
  if (id == "E1") {
    cfg.n_list = {1'000, 100'000, 10'000'000};
    cfg.replicas = 5'000;
  } else if (id == "E2") {
    cfg.n_list = {10'000, 1'000'000};
    cfg.replicas = 5'000;
    cfg.s = 0.5;
    cfg.t = 1.0;
  } else if (id == "E3") {
    cfg.radius_list = {10, 100, 1'000};
    cfg.cap = 100'000'000;
    cfg.replicas = 1'000;
  } else if (id == "E4") {
    cfg.n_list = {10'000, 1'000'000};
    cfg.replicas = 5'000;
  } else if (id == "E5") {
    cfg.n_list = {1'000'000};
    cfg.replicas = 10'000;
    cfg.s = 0.5;
    cfg.band = 0.1;
  } else if (id == "E6") {
    cfg.n_list = {1'000'000};
    cfg.replicas = 2'000;
    cfg.delta_list = {0.1, 0.01, 0.001};
    cfg.eta = 0.2;
    cfg.grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    cfg.epsilon = 0.01;
  } else {
    throw std::invalid_argument("unknown experiment id: " + id);
  }
  return cfg;
}

ExperimentResult run_e1(const ExperimentConfig& cfg, const RunOptions& opts) {
  require(cfg.replicas >= 1, "E1: replicas must be >= 1");
  check_n_list(cfg.n_list);
  const unsigned threads = resolve_thread_count(opts.threads);
  const std::uint64_t R = cfg.replicas;
  const std::uint64_t seed = experiment_seed(cfg.master_seed, "E1");
  const std::size_t n_count = cfg.n_list.size();

  std::vector<std::vector<std::uint32_t>> visits(n_count, std::vector<std::uint32_t>(R));
  {
    const std::uint64_t n_max = cfg.n_list.back();
    for_each_replica(R, threads, [&](std::uint64_t i) {
      const auto rec = simulate_walk_returns(n_max, RngStream::derived(seed, i));
      for (std::size_t j = 0; j < n_count; ++j)
        visits[j][i] = static_cast<std::uint32_t>(rec.local_time(cfg.n_list[j]));
    });
  }

  const ReferenceLaw limit_law = ReferenceLaw::exp_mean(1.0 / std::numbers::pi);
  std::vector<SampleRow> rows;
  rows.reserve(R * n_count);
  ojson per_n = ojson::array();
  std::vector<double> ks_values;
  double worst_z = 0.0;
  bool any_enumerable = false;

  for (std::size_t j = 0; j < n_count; ++j) {
    const std::uint64_t n = cfg.n_list[j];
    const double log_n = std::log(static_cast<double>(n));
    const std::string name = stat_name("local_time_scaled", "n", n);
    std::vector<double> scaled(R);
    for (std::uint64_t i = 0; i < R; ++i) {
      scaled[i] = visits[j][i] / log_n;
      rows.push_back({i, name, scaled[i]});
    }
    const KSReport ks = ks_one_sample(scaled, limit_law);
    ks_values.push_back(ks.statistic);

    ojson entry;
    entry["n"] = n;
    entry["mean_scaled"] = sample_mean(scaled);
    entry["exact_mean_scaled"] = exact_mean_local_time(n) / log_n;
    entry["ks_vs_exponential"] = ks_json(ks);
    if (n <= kMaxEnumerationHorizon) {
      any_enumerable = true;
      const LocalTimePmf pmf = enumerate_local_time_distribution(n);
      std::vector<std::uint64_t> observed(pmf.counts.size(), 0);
      for (std::uint64_t i = 0; i < R; ++i) ++observed[visits[j][i]];
      double max_z = 0.0;
      for (std::size_t k = 0; k < pmf.counts.size(); ++k) {
        const double p = pmf.probability(k);
        const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(R));
        const double z = std::abs(static_cast<double>(observed[k]) / static_cast<double>(R) - p) / se;
        max_z = std::max(max_z, z);
      }
      worst_z = std::max(worst_z, max_z);
      ojson en;
      en["atoms"] = pmf.counts.size();
      en["max_z"] = max_z;
      entry["enumeration"] = en;
    }
    per_n.push_back(entry);
  }

  GateSet gates;
  gates.add("pmf_within_4_sigma", any_enumerable, worst_z <= 4.0,
            "max atom z-score " + brief(worst_z) + " vs 4");
  gates.add("ks_strictly_decreasing", n_count >= 2 && cfg.n_list.front() >= 100,
            strictly_decreasing(ks_values), "D = [" + list_brief(ks_values) + "]");
  gates.add("ks_final_below_0.20", cfg.n_list.back() >= 10'000'000, ks_values.back() <= 0.20,
            "final D = " + brief(ks_values.back()));

  ojson config_echo;
  config_echo["master_seed"] = cfg.master_seed;
  config_echo["replicas"] = R;
  config_echo["n_list"] = cfg.n_list;

  ojson results;
  results["per_n"] = per_n;
  return finalize(cfg, config_echo, results, gates, rows, opts);
}

ExperimentResult run_e2(const ExperimentConfig& cfg, const RunOptions& opts) {
  require(cfg.replicas >= 1, "E2: replicas must be >= 1");
  check_n_list(cfg.n_list);
  require(cfg.s >= 0.0 && cfg.s <= cfg.t && cfg.t <= 1.0 && cfg.t > 0.0,
          "E2: window exponents need 0 <= s <= t <= 1 with t > 0");
  const unsigned threads = resolve_thread_count(opts.threads);
  const std::uint64_t R = cfg.replicas;
  const std::uint64_t seed = experiment_seed(cfg.master_seed, "E2");
  const auto records = simulate_ensemble(seed, R, cfg.n_list.back(), threads);

  const ReferenceLaw jump_law = ReferenceLaw::exp_mean(cfg.t / std::numbers::pi);
  std::vector<SampleRow> rows;
  ojson per_n = ojson::array();
  std::vector<double> ks_nonzero_values;
  bool ks_all_present = true;
  double final_zero_freq = 0.0;

  for (std::uint64_t n : cfg.n_list) {
    const double log_n = std::log(static_cast<double>(n));
    const std::uint64_t a = window_floor(n, cfg.s);
    const std::uint64_t b = window_floor(n, cfg.t);
    const std::string inc_name = stat_name("increment", "n", n);
    const std::string sigma_name = stat_name("sigma_stat", "n", n);

    std::uint64_t zero_count = 0;
    std::vector<double> nonzero;
    std::vector<double> sigma_stats;
    sigma_stats.reserve(R);
    std::uint64_t sigma_none = 0;
    for (std::uint64_t i = 0; i < R; ++i) {
      const ReturnRecord& rec = records[i];
      const std::uint64_t count = rec.local_time(b) - rec.local_time(a);
      const double value = count / log_n;
      rows.push_back({i, inc_name, value});
      if (count == 0) {
        ++zero_count;
      } else {
        nonzero.push_back(value);
      }
      const auto sigma = first_return_after(rec, a);
      if (sigma && *sigma <= n) {
        const double stat = std::log(static_cast<double>(*sigma)) / log_n;
        sigma_stats.push_back(stat);
        rows.push_back({i, sigma_name, stat});
      } else {
        sigma_stats.push_back(kInf);
        ++sigma_none;
      }
    }

    const double zero_freq = static_cast<double>(zero_count) / static_cast<double>(R);
    final_zero_freq = zero_freq;
    ojson entry;
    entry["n"] = n;
    entry["window"] = {a, b};
    entry["zero_count"] = zero_count;
    entry["zero_freq"] = zero_freq;
    entry["expected_zero_freq"] = cfg.s / cfg.t;
    if (!nonzero.empty()) {
      const KSReport ks = ks_one_sample(nonzero, jump_law);
      ks_nonzero_values.push_back(ks.statistic);
      entry["ks_nonzero_vs_exponential"] = ks_json(ks);
    } else {
      ks_all_present = false;
      entry["ks_nonzero_vs_exponential"] = nullptr;
    }
    if (cfg.s > 0.0) {
      const double s = cfg.s;
      const KSReport ks_sigma = ks_sub_law(
          sigma_stats, [s](double u) { return 1.0 - s / u; }, s, 1.0);
      entry["ks_sigma_vs_sub_cdf"] = ks_json(ks_sigma);
    }
    entry["sigma_none_count"] = sigma_none;
    per_n.push_back(entry);
  }

  GateSet gates;
  const bool freq_applicable =
      cfg.n_list.back() >= 1'000'000 && R >= 5'000 && cfg.s > 0.0 && cfg.s < cfg.t;
  gates.add("zero_freq_within_0.05", freq_applicable,
            std::abs(final_zero_freq - cfg.s / cfg.t) <= 0.05,
            "freq " + brief(final_zero_freq) + " vs " + brief(cfg.s / cfg.t));
  gates.add("ks_nonzero_strictly_decreasing",
            cfg.n_list.size() >= 2 && cfg.n_list.front() >= 10'000 && ks_all_present,
            strictly_decreasing(ks_nonzero_values), "D = [" + list_brief(ks_nonzero_values) + "]");

  ojson config_echo;
  config_echo["master_seed"] = cfg.master_seed;
  config_echo["replicas"] = R;
  config_echo["n_list"] = cfg.n_list;
  config_echo["s"] = cfg.s;
  config_echo["t"] = cfg.t;

  ojson results;
  results["per_n"] = per_n;
  return finalize(cfg, config_echo, results, gates, rows, opts);
}

ExperimentResult run_e3(const ExperimentConfig& cfg, const RunOptions& opts) {
  require(cfg.replicas >= 1, "E3: replicas must be >= 1");
  require(!cfg.radius_list.empty(), "E3: radius_list must be nonempty");
  std::uint64_t prev = 1;
  for (std::uint64_t r : cfg.radius_list) {
    require(r >= 2, "E3: radii must be >= 2 (log r must be positive)");
    require(r > prev, "E3: radius_list must be strictly increasing");
    prev = r;
  }
  const std::uint64_t r_max = cfg.radius_list.back();
  require(cfg.cap > r_max * r_max,
          "E3: cap must exceed the square of the largest radius so the KS window is nonempty");

  const unsigned threads = resolve_thread_count(opts.threads);
  const std::uint64_t R = cfg.replicas;
  const std::uint64_t seed = experiment_seed(cfg.master_seed, "E3");
  const double log_cap = std::log(static_cast<double>(cfg.cap));
  const ReferenceLaw law = ReferenceLaw::reciprocal_uniform();

  std::vector<SampleRow> rows;
  ojson per_radius = ojson::array();
  std::vector<double> ks_values;

  for (std::size_t r_idx = 0; r_idx < cfg.radius_list.size(); ++r_idx) {
    const std::uint64_t r = cfg.radius_list[r_idx];
    const double two_log_r = 2.0 * std::log(static_cast<double>(r));
    const double x_cap = log_cap / two_log_r;
    std::vector<double> stats(R);
    for_each_replica(R, threads, [&](std::uint64_t i) {
      const auto outcome = simulate_hitting_time({static_cast<std::int64_t>(r), 0}, cfg.cap,
                                                 RngStream::derived(seed, r_idx * R + i));
      stats[i] = outcome.hit()
                     ? std::log(static_cast<double>(*outcome.hit_time)) / two_log_r
                     : kInf;
    });

    const std::string name = stat_name("hitting_stat", "r", r);
    std::vector<double> finite;
    finite.reserve(R);
    std::uint64_t below_window = 0;
    for (std::uint64_t i = 0; i < R; ++i) {
      if (stats[i] == kInf) continue;
      finite.push_back(stats[i]);
      rows.push_back({i, name, stats[i]});
      if (stats[i] < 1.0) ++below_window;
    }
    const std::uint64_t censored = R - finite.size();
    // Censored entries stay in the sample as +infinity: the empirical CDF
    // keeps the full-count denominator and the sup runs over the window where
    // the cap cannot distort it.
    const KSReport ks =
        ks_sub_law(stats, [&law](double x) { return law.cdf(x); }, 1.0, x_cap);
    ks_values.push_back(ks.statistic);

    ojson entry;
    entry["radius"] = r;
    entry["x_cap"] = x_cap;
    entry["censored_count"] = censored;
    entry["censored_freq"] = static_cast<double>(censored) / static_cast<double>(R);
    entry["censored_freq_heuristic"] = std::clamp(two_log_r / log_cap, 0.0, 1.0);
    entry["below_window_count"] = below_window;
    entry["ks_censored_vs_reciprocal_uniform"] = ks_json(ks);
    per_radius.push_back(entry);
  }

  GateSet gates;
  gates.add("ks_strictly_decreasing", cfg.radius_list.size() >= 2 && cfg.radius_list.front() >= 10,
            strictly_decreasing(ks_values), "D = [" + list_brief(ks_values) + "]");
  gates.add("ks_final_below_0.10",
            r_max >= 1'000 && cfg.cap >= 100'000'000 && R >= 1'000,
            ks_values.back() <= 0.10, "final D = " + brief(ks_values.back()));

  ojson config_echo;
  config_echo["master_seed"] = cfg.master_seed;
  config_echo["replicas"] = R;
  config_echo["radius_list"] = cfg.radius_list;
  config_echo["cap"] = cfg.cap;

  ojson results;
  results["per_radius"] = per_radius;
  return finalize(cfg, config_echo, results, gates, rows, opts);
}

ExperimentResult run_e4(const ExperimentConfig& cfg, const RunOptions& opts) {
  require(cfg.replicas >= 1, "E4: replicas must be >= 1");
  check_n_list(cfg.n_list);
  const unsigned threads = resolve_thread_count(opts.threads);
  const std::uint64_t R = cfg.replicas;
  const std::uint64_t seed = experiment_seed(cfg.master_seed, "E4");
  const auto records = simulate_ensemble(seed, R, cfg.n_list.back(), threads);
  const ReferenceLaw uniform = ReferenceLaw::uniform01();

  std::vector<SampleRow> rows;
  ojson per_n = ojson::array();
  std::vector<double> ks_last_values;
  std::vector<double> ks_max_values;
  std::vector<double> dominance_probe_values;

  for (std::uint64_t n : cfg.n_list) {
    const double log_n = std::log(static_cast<double>(n));
    const std::string last_name = stat_name("last_return_stat", "n", n);
    const std::string max_name = stat_name("max_excursion_stat", "n", n);
    const std::string ratio_name = stat_name("dominance_ratio", "n", n);
    std::vector<double> last_stats;
    std::vector<double> max_stats;
    std::vector<double> ratios;
    std::uint64_t no_return = 0;
    for (std::uint64_t i = 0; i < R; ++i) {
      const auto& ret = records[i].returns;
      std::uint64_t last = 0;
      std::uint64_t longest = 0;
      std::uint64_t prev_r = 0;
      for (std::uint64_t rtime : ret) {
        if (rtime > n) break;
        longest = std::max(longest, rtime - prev_r);
        prev_r = rtime;
        last = rtime;
      }
      if (last == 0) {
        ++no_return;
        continue;
      }
      last_stats.push_back(std::log(static_cast<double>(last)) / log_n);
      max_stats.push_back(std::log(static_cast<double>(longest)) / log_n);
      ratios.push_back(static_cast<double>(longest) / static_cast<double>(last));
      rows.push_back({i, last_name, last_stats.back()});
      rows.push_back({i, max_name, max_stats.back()});
      rows.push_back({i, ratio_name, ratios.back()});
    }
    require(!last_stats.empty(), "E4: no replica returned to the origin; increase replicas");

    const KSReport ks_last = ks_one_sample(last_stats, uniform);
    const KSReport ks_max = ks_one_sample(max_stats, uniform);
    std::uint64_t dominated = 0;
    for (double x : ratios)
      if (x < 0.9) ++dominated;
    const double probe = static_cast<double>(dominated) / static_cast<double>(ratios.size());
    ks_last_values.push_back(ks_last.statistic);
    ks_max_values.push_back(ks_max.statistic);
    dominance_probe_values.push_back(probe);

    ojson entry;
    entry["n"] = n;
    entry["no_return_count"] = no_return;
    entry["conditioned_replicas"] = last_stats.size();
    entry["ks_last_return_vs_uniform"] = ks_json(ks_last);
    entry["ks_max_excursion_vs_uniform"] = ks_json(ks_max);
    entry["dominance_probe_below_0.9"] = probe;
    per_n.push_back(entry);
  }

  const bool trend_applicable = cfg.n_list.size() >= 2 && cfg.n_list.front() >= 10'000;
  GateSet gates;
  gates.add("ks_last_return_strictly_decreasing", trend_applicable,
            strictly_decreasing(ks_last_values), "D = [" + list_brief(ks_last_values) + "]");
  gates.add("ks_max_excursion_strictly_decreasing", trend_applicable,
            strictly_decreasing(ks_max_values), "D = [" + list_brief(ks_max_values) + "]");
  gates.add("ks_final_below_0.15", cfg.n_list.back() >= 100'000'000,
            ks_last_values.back() <= 0.15 && ks_max_values.back() <= 0.15,
            "final D = " + brief(ks_last_values.back()) + " / " + brief(ks_max_values.back()));
  gates.add("dominance_probe_non_increasing", cfg.n_list.size() >= 2,
            non_increasing(dominance_probe_values),
            "probe = [" + list_brief(dominance_probe_values) + "]");

  ojson config_echo;
  config_echo["master_seed"] = cfg.master_seed;
  config_echo["replicas"] = R;
  config_echo["n_list"] = cfg.n_list;

  ojson results;
  results["per_n"] = per_n;
  return finalize(cfg, config_echo, results, gates, rows, opts);
}

ExperimentResult run_e5(const ExperimentConfig& cfg, const RunOptions& opts) {
  require(cfg.replicas >= 2, "E5: replicas must be >= 2");
  check_n_list(cfg.n_list);
  require(cfg.s > 0.0 && cfg.s < 1.0, "E5: window exponent s must lie in (0, 1)");
  require(cfg.band > 0.0, "E5: band must be positive");
  const unsigned threads = resolve_thread_count(opts.threads);
  const std::uint64_t R = cfg.replicas;
  const std::uint64_t n = cfg.n_list.back();
  const std::uint64_t m = window_floor(n, cfg.s);
  require(m >= 1, "E5: floor(n^s) must be >= 1");
  const std::uint64_t seed = experiment_seed(cfg.master_seed, "E5");
  const double log_n = std::log(static_cast<double>(n));

  std::vector<double> radius_stats(R);
  std::vector<double> local_stats(R);
  for_each_replica(R, threads, [&](std::uint64_t i) {
    const auto snap = simulate_walk_with_endpoint(m, RngStream::derived(seed, i));
    const std::int64_t r2 = snap.end.x * snap.end.x + snap.end.y * snap.end.y;
    radius_stats[i] = r2 == 0 ? -kInf : 0.5 * std::log(static_cast<double>(r2)) / log_n;
    local_stats[i] = static_cast<double>(snap.record.local_time()) / log_n;
  });

  std::vector<SampleRow> rows;
  rows.reserve(2 * R);
  std::vector<double> finite_radius;
  std::vector<double> finite_local;
  std::uint64_t at_origin = 0;
  std::uint64_t covered = 0;
  for (std::uint64_t i = 0; i < R; ++i) {
    rows.push_back({i, "local_time_stat", local_stats[i]});
    if (radius_stats[i] == -kInf) {
      ++at_origin;
      continue;
    }
    rows.push_back({i, "radius_stat", radius_stats[i]});
    finite_radius.push_back(radius_stats[i]);
    finite_local.push_back(local_stats[i]);
    if (std::abs(radius_stats[i] - cfg.s / 2.0) <= cfg.band) ++covered;
  }
  const double coverage = static_cast<double>(covered) / static_cast<double>(R);
  const KSReport ks_local =
      ks_one_sample(local_stats, ReferenceLaw::exp_mean(cfg.s / std::numbers::pi));

  GateSet gates;
  gates.add("radius_coverage_at_least_1_minus_band", n >= 1'000'000,
            coverage >= 1.0 - cfg.band, "coverage " + brief(coverage));

  ojson config_echo;
  config_echo["master_seed"] = cfg.master_seed;
  config_echo["replicas"] = R;
  config_echo["n"] = n;
  config_echo["s"] = cfg.s;
  config_echo["band"] = cfg.band;

  ojson results;
  results["window"] = m;
  results["coverage"] = coverage;
  results["target_radius_stat"] = cfg.s / 2.0;
  results["at_origin_count"] = at_origin;
  results["ks_local_time_vs_exponential"] = ks_json(ks_local);
  results["radius_local_time_correlation"] = pearson_correlation(finite_radius, finite_local);
  return finalize(cfg, config_echo, results, gates, rows, opts);
}

ExperimentResult run_e6(const ExperimentConfig& cfg, const RunOptions& opts) {
  require(cfg.replicas >= 1, "E6: replicas must be >= 1");
  check_n_list(cfg.n_list);
  require(!cfg.delta_list.empty(), "E6: delta_list must be nonempty");
  double prev_delta = 1.0;
  for (double d : cfg.delta_list) {
    require(d > 0.0 && d < prev_delta, "E6: delta_list must be strictly decreasing in (0, 1)");
    prev_delta = d;
  }
  require(cfg.eta > 0.0, "E6: eta must be positive");
  require(!cfg.grid.empty(), "E6: grid must be nonempty");
  require(cfg.epsilon > 0.0 && cfg.epsilon < 1.0, "E6: epsilon must lie in (0, 1)");
  require(cfg.staircase_count >= 1, "E6: staircase_count must be >= 1");
  require(cfg.staircase_width > 0.0 && 0.5 + cfg.staircase_width <= 1.0,
          "E6: staircase must fit inside (0.5, 1]");
  require(cfg.resolution > 0.0, "E6: resolution must be positive");
  require(cfg.mesh >= 0.0, "E6: mesh must be nonnegative");

  const unsigned threads = resolve_thread_count(opts.threads);
  const std::uint64_t R = cfg.replicas;
  const std::uint64_t n = cfg.n_list.back();
  const std::uint64_t seed = experiment_seed(cfg.master_seed, "E6");
  const double log_eps = std::log(1.0 / cfg.epsilon);

  // Per-replica pieces: a walk path, one limit draw on the grid, one jump-time
  // draw, one limit draw on the midpoint-refined grid, all from disjoint
  // stream indices.
  std::vector<double> refined_grid;
  for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
    if (i == 0) {
      if (cfg.grid[i] > 0.0) refined_grid.push_back(cfg.grid[i] / 2.0);
    } else if (cfg.grid[i] > cfg.grid[i - 1]) {
      refined_grid.push_back((cfg.grid[i - 1] + cfg.grid[i]) / 2.0);
    }
    refined_grid.push_back(cfg.grid[i]);
  }

  std::vector<double> j1_bounds(R);
  std::vector<double> uniform_gaps(R);
  std::vector<double> value_at_end_coarse(R);
  std::vector<double> value_at_end_refined(R);
  std::vector<double> jump_counts(R);
  std::vector<std::uint8_t> probe_start_hits(R * cfg.delta_list.size());
  std::vector<std::uint8_t> probe_end_hits(R * cfg.delta_list.size());

  for_each_replica(R, threads, [&](std::uint64_t i) {
    const auto rec = simulate_walk_returns(n, RngStream::derived(seed, i));
    const RescaledPath path = build_rescaled_path(rec);
    for (std::size_t d = 0; d < cfg.delta_list.size(); ++d) {
      const double delta = cfg.delta_list[d];
      probe_start_hits[d * R + i] = eval_path(path, delta) >= cfg.eta ? 1 : 0;
      probe_end_hits[d * R + i] = path_increment(path, 1.0 - delta, 1.0) >= cfg.eta ? 1 : 0;
    }

    RngStream grid_stream = RngStream::derived(seed, R + i);
    const LimitGridSample draw = sample_grid(cfg.grid, grid_stream);
    const MonotonePath walk_path = as_piecewise_linear(path);
    const MonotonePath limit_path = as_step_function(draw);
    j1_bounds[i] = j1_jump_gap_lower_bound(walk_path, limit_path, cfg.mesh).value;
    uniform_gaps[i] = uniform_distance(walk_path, limit_path, cfg.grid).value;
    value_at_end_coarse[i] = draw.values.back();

    RngStream jump_stream = RngStream::derived(seed, 2 * R + i);
    jump_counts[i] = static_cast<double>(sample_jump_times(cfg.epsilon, jump_stream).times.size());

    RngStream refined_stream = RngStream::derived(seed, 3 * R + i);
    value_at_end_refined[i] = sample_grid(refined_grid, refined_stream).values.back();
  });

  std::vector<double> last_jumps(R);
  {
    RngStream last_stream = RngStream::derived(seed, 4 * R);
    for (std::uint64_t i = 0; i < R; ++i) last_jumps[i] = last_jump_time(last_stream);
  }

  std::vector<SampleRow> rows;
  rows.reserve(5 * R);
  for (std::uint64_t i = 0; i < R; ++i) {
    rows.push_back({i, "j1_bound", j1_bounds[i]});
    rows.push_back({i, "uniform_gap", uniform_gaps[i]});
    rows.push_back({i, "limit_value_at_one", value_at_end_coarse[i]});
    rows.push_back({i, "jump_count", jump_counts[i]});
    rows.push_back({i, "last_jump", last_jumps[i]});
  }

  // Endpoint mass probes.
  ojson probes = ojson::array();
  std::vector<double> start_freqs, end_freqs;
  for (std::size_t d = 0; d < cfg.delta_list.size(); ++d) {
    std::uint64_t cs = 0, ce = 0;
    for (std::uint64_t i = 0; i < R; ++i) {
      cs += probe_start_hits[d * R + i];
      ce += probe_end_hits[d * R + i];
    }
    const double fs = static_cast<double>(cs) / static_cast<double>(R);
    const double fe = static_cast<double>(ce) / static_cast<double>(R);
    start_freqs.push_back(fs);
    end_freqs.push_back(fe);
    ojson entry;
    entry["delta"] = cfg.delta_list[d];
    entry["start_mass_count"] = cs;
    entry["start_mass_freq"] = fs;
    entry["end_mass_count"] = ce;
    entry["end_mass_freq"] = fe;
    probes.push_back(entry);
  }

  // Deterministic metric block.
  const StepFunction step_half = StepFunction::unit_step(0.5);
  const StepFunction stair = StepFunction::staircase(0.5, cfg.staircase_width, cfg.staircase_count);
  const MetricReport m1_stair = m1_distance(step_half, stair, cfg.resolution);
  const MetricReport j1_stair = j1_jump_gap_lower_bound(stair, step_half, cfg.mesh);
  const MetricReport pair_near =
      m1_distance(StepFunction::unit_step(0.4), StepFunction::unit_step(0.5), cfg.resolution);
  const MetricReport pair_far =
      m1_distance(StepFunction::unit_step(0.1), StepFunction::unit_step(0.9), cfg.resolution);

  // Limit-sampler self-checks.
  const KSReport ks_value_at_one = ks_one_sample(
      value_at_end_coarse, ReferenceLaw::exp_mean(cfg.grid.back() / std::numbers::pi));
  const KSReport ks_refined = ks_two_sample(value_at_end_coarse, value_at_end_refined);
  const KSReport ks_last_jump = ks_one_sample(last_jumps, ReferenceLaw::uniform01());
  const double count_mean = sample_mean(jump_counts);
  const double count_se = R >= 2 ? std::sqrt(sample_variance(jump_counts) / static_cast<double>(R)) : 0.0;
  const double count_z = count_se > 0.0 ? (count_mean - log_eps) / count_se : 0.0;

  double j1_mean = sample_mean(j1_bounds);

  GateSet gates;
  gates.add("start_mass_non_increasing", cfg.delta_list.size() >= 2, non_increasing(start_freqs),
            "freq = [" + list_brief(start_freqs) + "]");
  gates.add("end_mass_non_increasing", cfg.delta_list.size() >= 2, non_increasing(end_freqs),
            "freq = [" + list_brief(end_freqs) + "]");
  const bool small_probe_applicable = n >= 1'000'000 && cfg.eta >= 0.2 && R >= 1'000;
  gates.add("smallest_delta_mass_below_0.05", small_probe_applicable,
            start_freqs.back() <= 0.05 && end_freqs.back() <= 0.05,
            "freqs " + brief(start_freqs.back()) + " / " + brief(end_freqs.back()));
  const double stair_bound = std::max(cfg.staircase_width,
                                      0.5 / static_cast<double>(cfg.staircase_count)) +
                             2.0 * cfg.resolution;
  gates.add("staircase_m1_within_bound", true, m1_stair.value <= stair_bound,
            brief(m1_stair.value) + " vs " + brief(stair_bound));
  const double j1_floor = 0.5 - 0.5 / static_cast<double>(cfg.staircase_count) - 0.005;
  gates.add("staircase_j1_bound_large",
            cfg.mesh < cfg.staircase_width / static_cast<double>(cfg.staircase_count),
            j1_stair.value >= j1_floor, brief(j1_stair.value) + " vs floor " + brief(j1_floor));
  gates.add("sampler_jump_count_within_4_sigma", R >= 1'000, std::abs(count_z) <= 4.0,
            "mean " + brief(count_mean) + " vs " + brief(log_eps) + ", z = " + brief(count_z));
  gates.add("sampler_refinement_consistent", R >= 1'000, ks_refined.p_value > 0.01,
            "two-sample p = " + brief(ks_refined.p_value));
  gates.add("sampler_last_jump_uniform", R >= 1'000, ks_last_jump.p_value > 0.01,
            "p = " + brief(ks_last_jump.p_value));

  ojson config_echo;
  config_echo["master_seed"] = cfg.master_seed;
  config_echo["replicas"] = R;
  config_echo["n"] = n;
  config_echo["delta_list"] = cfg.delta_list;
  config_echo["eta"] = cfg.eta;
  config_echo["grid"] = cfg.grid;
  config_echo["epsilon"] = cfg.epsilon;
  config_echo["staircase_count"] = cfg.staircase_count;
  config_echo["staircase_width"] = cfg.staircase_width;
  config_echo["resolution"] = cfg.resolution;
  config_echo["mesh"] = cfg.mesh;

  ojson metrics;
  metrics["staircase_m1"] = {{"value", m1_stair.value}, {"error_bound", m1_stair.error_bound}};
  metrics["staircase_j1_lower_bound"] = j1_stair.value;
  metrics["shifted_pair_0.4_0.5_m1"] = pair_near.value;
  metrics["shifted_pair_0.1_0.9_m1"] = pair_far.value;

  ojson sampler;
  sampler["ks_value_at_one_vs_exponential"] = ks_json(ks_value_at_one);
  sampler["jump_count_mean"] = count_mean;
  sampler["jump_count_expected"] = log_eps;
  sampler["jump_count_z"] = count_z;
  sampler["ks_refinement_two_sample"] = ks_json(ks_refined);
  sampler["ks_last_jump_vs_uniform"] = ks_json(ks_last_jump);

  ojson overlay;
  overlay["j1_bound_mean"] = j1_mean;
  overlay["uniform_gap_mean"] = sample_mean(uniform_gaps);

  ojson results;
  results["probes"] = probes;
  results["metrics"] = metrics;
  results["sampler"] = sampler;
  results["overlay"] = overlay;
  return finalize(cfg, config_echo, results, gates, rows, opts);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  if (cfg.id == "E1") return run_e1(cfg, opts);
  if (cfg.id == "E2") return run_e2(cfg, opts);
  if (cfg.id == "E3") return run_e3(cfg, opts);
  if (cfg.id == "E4") return run_e4(cfg, opts);
  if (cfg.id == "E5") return run_e5(cfg, opts);
  if (cfg.id == "E6") return run_e6(cfg, opts);
  throw std::invalid_argument("unknown experiment id: " + cfg.id);
}

}  // namespace loclim
