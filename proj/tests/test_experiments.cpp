#include <doctest.h>

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>

#include "loclim/experiments.hpp"

using namespace loclim;
using nlohmann::json;

namespace {

ExperimentConfig tiny(const std::string& id) {
  auto cfg = default_config(id);
  cfg.replicas = 200;
  cfg.master_seed = 611;
  return cfg;
}

}  // namespace

TEST_CASE("default configs exist for all six ids") {
  for (const std::string id : {"E1", "E2", "E3", "E4", "E5", "E6"}) {
    const auto cfg = default_config(id);
    CHECK(cfg.id == id);
    CHECK(cfg.replicas > 0);
  }
  CHECK_THROWS_AS((void)default_config("E7"), std::invalid_argument);
}

TEST_CASE("local time experiment produces a parseable summary") {
  auto cfg = tiny("E1");
  cfg.n_list = {100, 1000};
  const auto res = run_experiment(cfg, {});
  CHECK(res.id == "E1");
  const json j = json::parse(res.summary_json);
  CHECK(j.at("experiment") == "E1");
  CHECK(j.at("config").at("replicas") == 200);
  REQUIRE(j.at("results").at("per_n").size() == 2);
  const auto& row = j.at("results").at("per_n")[0];
  CHECK(row.at("n") == 100);
  CHECK(row.at("mean_scaled").get<double>() > 0.0);
  CHECK(row.at("exact_mean_scaled").get<double>() > 0.0);
  CHECK(row.at("ks_vs_exponential").at("statistic").get<double>() >= 0.0);
  // tiny horizons: the ladder gates stay out of the verdict
  for (const auto& g : res.gates)
    if (g.name == "ks_final_below_0.20") CHECK(!g.applicable);
}

TEST_CASE("summary bytes do not depend on the thread count") {
  auto cfg = tiny("E2");
  cfg.n_list = {500, 2000};
  RunOptions serial;
  serial.threads = 1;
  RunOptions pooled;
  pooled.threads = 4;
  const auto a = run_experiment(cfg, serial);
  const auto b = run_experiment(cfg, pooled);
  CHECK(a.summary_json == b.summary_json);
}

TEST_CASE("window increments with s == t are all zero") {
  auto cfg = tiny("E2");
  cfg.n_list = {500};
  cfg.s = 0.5;
  cfg.t = 0.5;
  const auto res = run_experiment(cfg, {});
  const json j = json::parse(res.summary_json);
  CHECK(j.at("results").at("per_n")[0].at("zero_freq").get<double>() == 1.0);
}

TEST_CASE("hitting experiment counts censored runs") {
  auto cfg = tiny("E3");
  cfg.replicas = 100;
  cfg.radius_list = {5, 20};
  cfg.cap = 2000;
  const auto res = run_experiment(cfg, {});
  const json j = json::parse(res.summary_json);
  for (const auto& row : j.at("results").at("per_radius")) {
    const auto cens = row.at("censored_count").get<std::uint64_t>();
    CHECK(cens <= 100);
    // the censored-KS keeps every replica in its denominator
    CHECK(row.at("ks_censored_vs_reciprocal_uniform").at("n").get<std::uint64_t>() == 100);
    CHECK(row.at("below_window_count").get<std::uint64_t>() + cens <= 100);
  }
}

TEST_CASE("excursion experiment conditions on a return") {
  auto cfg = tiny("E4");
  cfg.n_list = {300, 3000};
  const auto res = run_experiment(cfg, {});
  const json j = json::parse(res.summary_json);
  for (const auto& row : j.at("results").at("per_n")) {
    const auto conditioned = row.at("conditioned_replicas").get<std::uint64_t>();
    CHECK(conditioned + row.at("no_return_count").get<std::uint64_t>() == 200);
    CHECK(conditioned > 100);  // returns are common even at n = 300
    CHECK(row.at("ks_last_return_vs_uniform").at("statistic").get<double>() <= 1.0);
    CHECK(row.at("ks_max_excursion_vs_uniform").at("statistic").get<double>() <= 1.0);
  }
}

TEST_CASE("endpoint experiment reports radius coverage and correlation") {
  auto cfg = tiny("E5");
  cfg.n_list = {20000};
  const auto res = run_experiment(cfg, {});
  const json j = json::parse(res.summary_json);
  const auto& r = j.at("results");
  CHECK(r.at("coverage").get<double>() >= 0.0);
  CHECK(r.at("coverage").get<double>() <= 1.0);
  CHECK(std::abs(r.at("radius_local_time_correlation").get<double>()) <= 1.0);
}

TEST_CASE("overlay experiment smoke run") {
  auto cfg = tiny("E6");
  cfg.replicas = 120;
  cfg.n_list = {20000};
  cfg.delta_list = {0.2, 0.1};
  cfg.staircase_count = 20;
  cfg.staircase_width = 0.02;
  cfg.resolution = 5e-3;
  const auto res = run_experiment(cfg, {});
  const json j = json::parse(res.summary_json);
  const auto& r = j.at("results");
  CHECK(r.at("metrics").at("staircase_m1").at("value").get<double>() < 0.1);
  CHECK(r.at("metrics").at("staircase_j1_lower_bound").get<double>() > 0.4);
  CHECK(r.at("probes").size() == 2);
  // the walk mass gates need big horizons; the metric gates always apply
  bool saw_metric_gate = false;
  for (const auto& g : res.gates) {
    if (g.name == "staircase_m1_within_bound") {
      CHECK(g.applicable);
      CHECK(g.passed);
      saw_metric_gate = true;
    }
  }
  CHECK(saw_metric_gate);
}

TEST_CASE("experiment config validation") {
  auto cfg = tiny("E1");
  cfg.replicas = 0;
  CHECK_THROWS_AS((void)run_experiment(cfg, {}), std::invalid_argument);

  auto e3 = tiny("E3");
  e3.radius_list = {1, 10};
  CHECK_THROWS_AS((void)run_experiment(e3, {}), std::invalid_argument);

  auto e5 = tiny("E5");
  e5.n_list = {1000};
  e5.s = 1.0;
  CHECK_THROWS_AS((void)run_experiment(e5, {}), std::invalid_argument);

  auto e2 = tiny("E2");
  e2.n_list = {1000};
  e2.s = 0.9;
  e2.t = 0.5;
  CHECK_THROWS_AS((void)run_experiment(e2, {}), std::invalid_argument);

  auto bad = tiny("E1");
  bad.id = "nope";
  CHECK_THROWS_AS((void)run_experiment(bad, {}), std::invalid_argument);
}
