#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace loclim {

// One bag of knobs shared by the six experiments; each runner validates the
// subset it reads.  Thread count is deliberately not part of the config: two
// runs with the same config and seed produce byte-identical summaries no
// matter how replicas were scheduled.
struct ExperimentConfig {
  std::string id;  // "E1".."E6"
  std::uint64_t master_seed = 20260815;
  std::uint64_t replicas = 1000;
  std::vector<std::uint64_t> n_list;  // walk horizons, ascending

  // window exponents: increments over (floor(n^s), floor(n^t)]
  double s = 0.5;
  double t = 1.0;

  // hitting runs (E3)
  std::vector<std::uint64_t> radius_list;
  std::uint64_t cap = 100'000'000;

  // limit-process overlay (E6)
  std::vector<double> grid;
  double epsilon = 0.01;

  // endpoint mass probes (E6)
  std::vector<double> delta_list;  // strictly decreasing
  double eta = 0.2;

  // radius concentration (E5)
  double band = 0.1;

  // metric block (E6)
  std::size_t staircase_count = 100;
  double staircase_width = 0.01;
  double resolution = 1e-3;
  double mesh = 1e-5;
};

struct GateOutcome {
  std::string name;
  bool applicable = false;
  bool passed = true;
  std::string detail;
};

struct ExperimentResult {
  std::string id;
  std::string summary_json;  // exactly the bytes of summary.json
  std::vector<GateOutcome> gates;
  bool check_passed = true;  // AND over applicable gates
};

struct RunOptions {
  unsigned threads = 0;     // 0 = LOCLIM_THREADS env or hardware count
  std::string out_dir;      // empty = nothing written to disk
};

ExperimentConfig default_config(const std::string& id);

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts);

ExperimentResult run_e1(const ExperimentConfig& cfg, const RunOptions& opts);
ExperimentResult run_e2(const ExperimentConfig& cfg, const RunOptions& opts);
ExperimentResult run_e3(const ExperimentConfig& cfg, const RunOptions& opts);
ExperimentResult run_e4(const ExperimentConfig& cfg, const RunOptions& opts);
ExperimentResult run_e5(const ExperimentConfig& cfg, const RunOptions& opts);
ExperimentResult run_e6(const ExperimentConfig& cfg, const RunOptions& opts);

}  // namespace loclim
