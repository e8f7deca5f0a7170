#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "loclim/experiments.hpp"
#include "loclim/io.hpp"
#include "loclim/limit_process.hpp"
#include "loclim/parallel.hpp"
#include "loclim/rescaled_path.hpp"
#include "loclim/skorokhod.hpp"
#include "loclim/stats.hpp"
#include "loclim/version.hpp"
#include "loclim/walk.hpp"

namespace {

using loclim::SampleRow;
using ojson = nlohmann::ordered_json;

int run_simulate(std::uint64_t n, std::uint64_t replicas, std::uint64_t seed,
                 const std::string& out_dir, unsigned threads_opt,
                 std::optional<std::uint64_t> emit_path, double path_resolution) {
  if (replicas == 0) throw std::invalid_argument("simulate: replicas must be >= 1");
  const unsigned threads = loclim::resolve_thread_count(threads_opt);
  std::vector<loclim::ReturnRecord> records(replicas);
  loclim::for_each_replica(replicas, threads, [&](std::uint64_t i) {
    records[i] = loclim::simulate_walk_returns(n, loclim::RngStream::derived(seed, i));
  });

  const double log_n = std::log(static_cast<double>(n));
  std::vector<SampleRow> rows;
  rows.reserve(4 * replicas);
  double mean_scaled = 0.0;
  for (std::uint64_t i = 0; i < replicas; ++i) {
    const auto st = loclim::excursion_stats(records[i]);
    const double scaled = records[i].local_time() / log_n;
    mean_scaled += scaled;
    rows.push_back({i, "local_time", static_cast<double>(records[i].local_time())});
    rows.push_back({i, "local_time_scaled", scaled});
    rows.push_back({i, "last_return", static_cast<double>(st.last_return)});
    rows.push_back({i, "max_excursion", static_cast<double>(st.max_interior)});
  }
  mean_scaled /= static_cast<double>(replicas);

  if (!out_dir.empty()) {
    loclim::ensure_directory(out_dir);
    loclim::write_samples_csv(out_dir + "/samples.csv", rows);
    if (emit_path) {
      if (*emit_path >= replicas)
        throw std::invalid_argument("simulate: --emit-path replica index out of range");
      if (n < 2) throw std::invalid_argument("simulate: paths need n >= 2");
      const auto path = loclim::build_rescaled_path(records[*emit_path]);
      std::vector<loclim::PathPoint> pts;
      for (double t = 0.0; t < 1.0 + path_resolution / 2; t += path_resolution)
        pts.push_back({std::min(t, 1.0), loclim::eval_path(path, std::min(t, 1.0))});
      loclim::write_path_csv(out_dir + "/path_" + std::to_string(*emit_path) + ".csv", pts);
    }
  }
  std::cout << "simulate: n=" << n << " replicas=" << replicas
            << " mean local_time/log(n)=" << loclim::format_double(mean_scaled)
            << " (limit mean " << loclim::format_double(1.0 / std::numbers::pi) << ")\n";
  return 0;
}

int run_sample_limit(std::vector<double> grid, bool jump_times, double epsilon,
                     std::uint64_t replicas, std::uint64_t seed, const std::string& out_dir,
                     unsigned threads_opt) {
  if (replicas == 0) throw std::invalid_argument("sample-limit: replicas must be >= 1");
  const bool grid_mode = !grid.empty() || !jump_times;
  if (grid.empty()) grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  const unsigned threads = loclim::resolve_thread_count(threads_opt);

  std::vector<std::vector<double>> values(grid_mode ? replicas : 0);
  std::vector<std::vector<double>> jumps(jump_times ? replicas : 0);
  loclim::for_each_replica(replicas, threads, [&](std::uint64_t i) {
    if (grid_mode) {
      auto stream = loclim::RngStream::derived(seed, i);
      values[i] = loclim::sample_grid(grid, stream).values;
    }
    if (jump_times) {
      auto stream = loclim::RngStream::derived(seed, replicas + i);
      jumps[i] = loclim::sample_jump_times(epsilon, stream).times;
    }
  });

  std::vector<SampleRow> rows;
  if (grid_mode) {
    std::vector<std::string> names;
    names.reserve(grid.size());
    for (double t : grid) names.push_back("limit_value[t=" + loclim::format_double(t) + "]");
    for (std::uint64_t i = 0; i < replicas; ++i)
      for (std::size_t j = 0; j < grid.size(); ++j) rows.push_back({i, names[j], values[i][j]});
  }
  if (jump_times) {
    for (std::uint64_t i = 0; i < replicas; ++i) {
      for (double t : jumps[i]) rows.push_back({i, "jump_time", t});
      rows.push_back({i, "jump_count", static_cast<double>(jumps[i].size())});
    }
  }

  if (!out_dir.empty()) {
    loclim::ensure_directory(out_dir);
    loclim::write_samples_csv(out_dir + "/samples.csv", rows);
    if (grid_mode) {
      std::vector<loclim::PathPoint> pts;
      for (std::size_t j = 0; j < grid.size(); ++j) pts.push_back({grid[j], values[0][j]});
      loclim::write_path_csv(out_dir + "/path_0.csv", pts);
    }
  }

  if (grid_mode) {
    std::vector<double> at_end(replicas);
    for (std::uint64_t i = 0; i < replicas; ++i) at_end[i] = values[i].back();
    std::cout << "sample-limit: replicas=" << replicas
              << " mean value at t=" << loclim::format_double(grid.back()) << " is "
              << loclim::format_double(loclim::sample_mean(at_end)) << " (limit mean "
              << loclim::format_double(grid.back() / std::numbers::pi) << ")\n";
  }
  if (jump_times) {
    double mean = 0.0;
    for (const auto& j : jumps) mean += static_cast<double>(j.size());
    mean /= static_cast<double>(replicas);
    std::cout << "sample-limit: mean jump count in (" << loclim::format_double(epsilon)
              << ", 1] = " << loclim::format_double(mean) << " (limit mean "
              << loclim::format_double(std::log(1.0 / epsilon)) << ")\n";
  }
  return 0;
}

loclim::MonotonePath load_path(const std::string& file, const std::string& kind) {
  const auto pts = loclim::read_path_csv(file);
  if (kind == "linear") {
    loclim::PiecewiseLinear f;
    for (const auto& p : pts) f.vertices.push_back({p.t, p.value});
    return f;
  }
  if (kind == "step") {
    loclim::StepFunction f;
    std::size_t start = 0;
    if (pts.front().t == 0.0) {
      f.initial = pts.front().value;
      start = 1;
    }
    for (std::size_t i = start; i < pts.size(); ++i) f.jumps.push_back({pts[i].t, pts[i].value});
    return f;
  }
  throw std::invalid_argument("path kind must be 'step' or 'linear', got '" + kind + "'");
}

int run_metric(const std::string& kind, const std::string& lhs_file, const std::string& lhs_kind,
               const std::string& rhs_file, const std::string& rhs_kind, double resolution,
               double mesh, double grid_step, const std::string& out_dir) {
  const auto lhs = load_path(lhs_file, lhs_kind);
  const auto rhs = load_path(rhs_file, rhs_kind);

  loclim::MetricReport report;
  if (kind == "m1") {
    report = loclim::m1_distance(lhs, rhs, resolution);
  } else if (kind == "j1") {
    report = loclim::j1_jump_gap_lower_bound(lhs, rhs, mesh);
  } else if (kind == "uniform") {
    if (!(grid_step > 0.0 && grid_step <= 1.0))
      throw std::invalid_argument("metric: --grid-step must lie in (0, 1]");
    std::vector<double> grid;
    for (double t = 0.0; t < 1.0 + grid_step / 2; t += grid_step) grid.push_back(std::min(t, 1.0));
    report = loclim::uniform_distance(lhs, rhs, grid);
  } else {
    throw std::invalid_argument("metric kind must be m1, j1 or uniform, got '" + kind + "'");
  }

  ojson j;
  j["kind"] = kind;
  j["value"] = report.value;
  j["error_bound"] = report.error_bound;
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!out_dir.empty()) {
    loclim::ensure_directory(out_dir);
    loclim::write_text_file(out_dir + "/metric.json", text);
  }
  return 0;
}

int run_oracle(std::uint64_t n, std::optional<std::uint64_t> return_prob_m,
               std::optional<std::uint64_t> mean_horizon, const std::string& out_dir) {
  if (return_prob_m) {
    std::cout << "P(at origin at step " << 2 * *return_prob_m
              << ") = " << loclim::format_double(loclim::exact_return_probability(*return_prob_m))
              << "\n";
  }
  if (mean_horizon) {
    std::cout << "E[visits up to " << *mean_horizon
              << "] = " << loclim::format_double(loclim::exact_mean_local_time(*mean_horizon))
              << "\n";
  }
  if (n > 0) {
    const auto pmf = loclim::enumerate_local_time_distribution(n);
    std::string csv = "visits,count,probability\n";
    for (std::size_t k = 0; k < pmf.counts.size(); ++k) {
      csv += std::to_string(k) + "," + std::to_string(pmf.counts[k]) + "," +
             loclim::format_double(pmf.probability(k)) + "\n";
    }
    if (!out_dir.empty()) {
      loclim::ensure_directory(out_dir);
      loclim::write_text_file(out_dir + "/pmf_" + std::to_string(n) + ".csv", csv);
      std::cout << "wrote " << out_dir << "/pmf_" << n << ".csv\n";
    } else {
      std::cout << csv;
    }
    std::cout << "exact mean visits at n=" << n << ": " << loclim::format_double(pmf.mean())
              << "\n";
  }
  return 0;
}

int run_experiment_cmd(loclim::ExperimentConfig cfg, const loclim::RunOptions& opts, bool check) {
  const auto start = std::chrono::steady_clock::now();
  const auto result = loclim::run_experiment(cfg, opts);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  for (const auto& g : result.gates) {
    std::cout << "  [" << (g.applicable ? (g.passed ? "pass" : "FAIL") : "n/a ") << "] " << g.name
              << ": " << g.detail << "\n";
  }
  std::cout << result.id << (result.check_passed ? ": all applicable gates passed" : ": gate failure")
            << " (" << loclim::format_double(secs) << " s)";
  if (!opts.out_dir.empty()) std::cout << ", outputs in " << opts.out_dir;
  std::cout << "\n";
  if (check && !result.check_passed) return 2;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and analysis tool for origin visits of the planar simple random walk"};
  app.set_version_flag("--version", loclim::kVersionString);
  app.require_subcommand(1);

  int exit_code = 0;

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate origin-visit records for one horizon");
  std::uint64_t sim_n = 1'000'000;
  std::uint64_t sim_replicas = 1'000;
  std::uint64_t sim_seed = 20260815;
  std::string sim_out;
  unsigned sim_threads = 0;
  std::optional<std::uint64_t> sim_emit_path;
  double sim_path_resolution = 0.01;
  sim->add_option("--n", sim_n, "walk horizon")->required();
  sim->add_option("--replicas", sim_replicas, "independent walks");
  sim->add_option("--seed", sim_seed, "master seed");
  sim->add_option("--out", sim_out, "output directory");
  sim->add_option("--threads", sim_threads, "worker threads (0 = auto)");
  sim->add_option("--emit-path", sim_emit_path, "also write the rescaled path of this replica");
  sim->add_option("--path-resolution", sim_path_resolution, "time step for the emitted path")
      ->check(CLI::PositiveNumber);
  sim->callback([&] {
    exit_code = run_simulate(sim_n, sim_replicas, sim_seed, sim_out, sim_threads, sim_emit_path,
                             sim_path_resolution);
  });

  // sample-limit
  auto* lim = app.add_subcommand("sample-limit", "Draw from the pure-jump limit process");
  std::vector<double> lim_grid;
  bool lim_jump_times = false;
  double lim_epsilon = 0.01;
  std::uint64_t lim_replicas = 10'000;
  std::uint64_t lim_seed = 20260815;
  std::string lim_out;
  unsigned lim_threads = 0;
  lim->add_option("--grid", lim_grid, "evaluation times in (0, 1]")->delimiter(',');
  lim->add_flag("--jump-times", lim_jump_times, "sample jump times in (epsilon, 1]");
  lim->add_option("--epsilon", lim_epsilon, "truncation for --jump-times");
  lim->add_option("--replicas", lim_replicas, "independent draws");
  lim->add_option("--seed", lim_seed, "master seed");
  lim->add_option("--out", lim_out, "output directory");
  lim->add_option("--threads", lim_threads, "worker threads (0 = auto)");
  lim->callback([&] {
    exit_code = run_sample_limit(lim_grid, lim_jump_times, lim_epsilon, lim_replicas, lim_seed,
                                 lim_out, lim_threads);
  });

  // metric
  auto* met = app.add_subcommand("metric", "Compare two paths loaded from CSV files");
  std::string met_kind = "m1";
  std::string met_lhs, met_rhs;
  std::string met_lhs_kind = "step";
  std::string met_rhs_kind = "step";
  double met_resolution = 1e-3;
  double met_mesh = 1e-5;
  double met_grid_step = 1e-3;
  std::string met_out;
  met->add_option("--kind", met_kind, "m1, j1 or uniform");
  met->add_option("--lhs", met_lhs, "left path CSV (t,value)")->required();
  met->add_option("--rhs", met_rhs, "right path CSV (t,value)")->required();
  met->add_option("--lhs-kind", met_lhs_kind, "step or linear");
  met->add_option("--rhs-kind", met_rhs_kind, "step or linear");
  met->add_option("--resolution", met_resolution, "densification step for m1")
      ->check(CLI::PositiveNumber);
  met->add_option("--mesh", met_mesh, "window width for the j1 bound");
  met->add_option("--grid-step", met_grid_step, "grid step for the uniform metric");
  met->add_option("--out", met_out, "output directory");
  met->callback([&] {
    exit_code = run_metric(met_kind, met_lhs, met_lhs_kind, met_rhs, met_rhs_kind, met_resolution,
                           met_mesh, met_grid_step, met_out);
  });

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run one of the canned experiments E1..E6");
  std::string exp_id;
  std::vector<std::uint64_t> exp_n;
  std::vector<std::uint64_t> exp_radii;
  std::vector<double> exp_grid;
  std::vector<double> exp_deltas;
  std::uint64_t exp_replicas = 0;
  std::uint64_t exp_seed = 0;
  double exp_s = -1.0, exp_t = -1.0, exp_epsilon = -1.0, exp_eta = -1.0, exp_band = -1.0;
  double exp_resolution = -1.0, exp_mesh = -1.0, exp_stair_width = -1.0;
  std::uint64_t exp_cap = 0;
  std::size_t exp_stair_count = 0;
  std::string exp_out;
  unsigned exp_threads = 0;
  bool exp_check = false;
  exp->add_option("id", exp_id, "experiment id (E1..E6)")->required();
  exp->add_option("--n", exp_n, "horizons, ascending")->delimiter(',');
  exp->add_option("--replicas", exp_replicas, "replicas");
  exp->add_option("--seed", exp_seed, "master seed");
  exp->add_option("--s", exp_s, "lower window exponent");
  exp->add_option("--t", exp_t, "upper window exponent");
  exp->add_option("--radii", exp_radii, "hitting start offsets (E3)")->delimiter(',');
  exp->add_option("--cap", exp_cap, "hitting censor cap (E3)");
  exp->add_option("--grid", exp_grid, "limit grid (E6)")->delimiter(',');
  exp->add_option("--epsilon", exp_epsilon, "jump-time truncation (E6)");
  exp->add_option("--deltas", exp_deltas, "endpoint probe widths, decreasing (E6)")->delimiter(',');
  exp->add_option("--eta", exp_eta, "endpoint probe threshold (E6)");
  exp->add_option("--band", exp_band, "radius concentration half-width (E5)");
  exp->add_option("--staircase-count", exp_stair_count, "staircase risers (E6)");
  exp->add_option("--staircase-width", exp_stair_width, "staircase window width (E6)");
  exp->add_option("--resolution", exp_resolution, "metric densification step (E6)");
  exp->add_option("--mesh", exp_mesh, "j1 window width (E6)");
  exp->add_option("--out", exp_out, "output directory");
  exp->add_option("--threads", exp_threads, "worker threads (0 = auto)");
  exp->add_flag("--check", exp_check, "exit 2 when an applicable gate fails");
  exp->callback([&] {
    auto cfg = loclim::default_config(exp_id);
    if (!exp_n.empty()) cfg.n_list = exp_n;
    if (exp->count("--replicas")) cfg.replicas = exp_replicas;
    if (exp->count("--seed")) cfg.master_seed = exp_seed;
    if (exp_s >= 0.0) cfg.s = exp_s;
    if (exp_t >= 0.0) cfg.t = exp_t;
    if (!exp_radii.empty()) cfg.radius_list = exp_radii;
    if (exp_cap > 0) cfg.cap = exp_cap;
    if (!exp_grid.empty()) cfg.grid = exp_grid;
    if (exp_epsilon >= 0.0) cfg.epsilon = exp_epsilon;
    if (!exp_deltas.empty()) cfg.delta_list = exp_deltas;
    if (exp_eta >= 0.0) cfg.eta = exp_eta;
    if (exp_band >= 0.0) cfg.band = exp_band;
    if (exp_stair_count > 0) cfg.staircase_count = exp_stair_count;
    if (exp_stair_width >= 0.0) cfg.staircase_width = exp_stair_width;
    if (exp_resolution >= 0.0) cfg.resolution = exp_resolution;
    if (exp_mesh >= 0.0) cfg.mesh = exp_mesh;
    loclim::RunOptions opts;
    opts.threads = exp_threads;
    opts.out_dir = exp_out;
    exit_code = run_experiment_cmd(cfg, opts, exp_check);
  });

  // oracle
  auto* ora = app.add_subcommand("oracle", "Exact enumeration and closed-form references");
  std::uint64_t ora_n = 0;
  std::optional<std::uint64_t> ora_return_m;
  std::optional<std::uint64_t> ora_mean_n;
  std::string ora_out;
  ora->add_option("--n", ora_n, "exact visit-count distribution for this horizon (<= 12)");
  ora->add_option("--return-prob", ora_return_m, "print P(at origin at step 2m) for this m");
  ora->add_option("--mean", ora_mean_n, "print the exact mean visit count for this horizon");
  ora->add_option("--out", ora_out, "output directory");
  ora->callback([&] {
    if (ora_n == 0 && !ora_return_m && !ora_mean_n)
      throw CLI::ValidationError("oracle", "pass --n, --return-prob or --mean");
    exit_code = run_oracle(ora_n, ora_return_m, ora_mean_n, ora_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
