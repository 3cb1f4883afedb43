#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "graphbandit/errors.hpp"
#include "graphbandit/experiment.hpp"
#include "graphbandit/rng.hpp"

using namespace graphbandit;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

nlohmann::json tiny_config_json() {
  return nlohmann::json::parse(R"({
    "family": "tiny",
    "graph": {"generator": "clique_union", "sizes": [3, 3]},
    "partition": {"method": "components"},
    "realization": {"mode": "well_clustered"},
    "adversary": {"kind": "stochastic_gap", "gap": 0.3, "best_arm": 1},
    "horizons": [64, 128, 256],
    "seeds": {"count": 3, "base": 1},
    "checkpoints": 8
  })");
}

}  // namespace

TEST_CASE("fit recovers exact power laws") {
  std::vector<std::pair<double, double>> pts;
  for (double t : {1e3, 1e4, 1e5}) pts.emplace_back(t, 5.0 * std::pow(t, 2.0 / 3.0));
  auto fit = fit_exponent(pts);
  REQUIRE(fit.defined);
  CHECK(fit.slope == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(fit.residual < 1e-12);

  pts.clear();
  for (double t : {1e3, 1e4, 1e5, 1e6}) pts.emplace_back(t, 3.0 * std::sqrt(t));
  fit = fit_exponent(pts);
  REQUIRE(fit.defined);
  CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("fit flags degenerate inputs instead of throwing") {
  std::vector<std::pair<double, double>> pts = {{10.0, 1.0}, {100.0, 2.0}};
  CHECK_FALSE(fit_exponent(pts).defined);
  pts = {{10.0, 1.0}, {100.0, 0.0}, {1000.0, 3.0}};
  const auto fit = fit_exponent(pts);
  CHECK_FALSE(fit.defined);
  CHECK_FALSE(fit.reason.empty());
}

TEST_CASE("fit tolerates multiplicative noise") {
  Philox rng(31415, 0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<std::pair<double, double>> pts;
    for (double t = 1024; t <= 1024 * 1024; t *= 4) {
      // ~5% multiplicative noise around a clean 2/3 power law.
      const double noise = 1.0 + 0.05 * (2.0 * rng.next_double() - 1.0);
      pts.emplace_back(t, 2.0 * std::pow(t, 2.0 / 3.0) * noise);
    }
    const auto fit = fit_exponent(pts);
    REQUIRE(fit.defined);
    CHECK(std::abs(fit.slope - 2.0 / 3.0) < 0.05);
  }
}

TEST_CASE("config parsing: presets, overrides and rejection paths") {
  auto cfg = parse_experiment(nlohmann::json::parse(
      R"({"preset": "clique-union", "horizons": [100, 200], "seeds": [5]})"));
  CHECK(cfg.family == "clique-union");
  CHECK(cfg.graph.generator == "clique_union");
  CHECK(cfg.horizons == std::vector<int64_t>{100, 200});
  CHECK(cfg.seeds == std::vector<uint64_t>{5});

  CHECK_THROWS_AS(parse_experiment(nlohmann::json::parse(R"({"horizons": [1]})")), ConfigError);
  CHECK_THROWS_AS(parse_experiment(nlohmann::json::parse(
                      R"({"graph": {"generator": "mab", "n": 2}, "horizons": [10, 10],
                          "seeds": [1]})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_experiment(nlohmann::json::parse(
                      R"({"graph": {"generator": "mab", "n": 2}, "horizons": [10],
                          "seeds": []})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_experiment(nlohmann::json::parse(
                      R"({"family": "a,b", "graph": {"generator": "mab", "n": 2},
                          "horizons": [10], "seeds": [1]})")),
                  ConfigError);
  CHECK_THROWS_AS(preset_json("nope"), ConfigError);
}

TEST_CASE("zero-loss experiment yields zero regret and an undefined fit") {
  auto j = tiny_config_json();
  j["adversary"] = {{"kind", "constant"}, {"value", 0.0}};
  const auto result = run_family(parse_experiment(j));
  CHECK_FALSE(result.any_failed);
  for (const auto& rec : result.runs) {
    for (const auto& cp : rec.checkpoints) CHECK(cp.regret == 0.0);
  }
  CHECK_FALSE(result.fit.defined);
  const auto summary = summary_json(result);
  CHECK(summary["fit"]["defined"] == false);
}

TEST_CASE("experiment output is byte-identical across runs and thread counts") {
  auto j = tiny_config_json();
  auto cfg = parse_experiment(j);
  cfg.threads = 1;
  const auto a = run_family(cfg);
  cfg.threads = 4;
  const auto b = run_family(cfg);
  write_csv("tmp_a.csv", std::vector<FamilyResult>{a});
  write_csv("tmp_b.csv", std::vector<FamilyResult>{b});
  CHECK(slurp("tmp_a.csv") == slurp("tmp_b.csv"));
  std::remove("tmp_a.csv");
  std::remove("tmp_b.csv");
}

TEST_CASE("emitted CSV reproduces the in-memory aggregates") {
  auto cfg = parse_experiment(tiny_config_json());
  const auto result = run_family(cfg);
  CHECK_FALSE(result.any_failed);
  write_csv("tmp_roundtrip.csv", std::vector<FamilyResult>{result});
  const auto fits = fit_from_csv("tmp_roundtrip.csv");
  REQUIRE(fits.size() == 1);
  CHECK(fits[0].first == "tiny");
  if (result.fit.defined) {
    REQUIRE(fits[0].second.defined);
    CHECK(fits[0].second.slope == doctest::Approx(result.fit.slope).epsilon(1e-12));
  }
  std::remove("tmp_roundtrip.csv");

  // Summary JSON parses back and echoes the constants.
  write_summary("tmp_summary.json", std::vector<FamilyResult>{result});
  const auto parsed = nlohmann::json::parse(slurp("tmp_summary.json"));
  CHECK(parsed["family"] == "tiny");
  CHECK(parsed["per_horizon"].size() == 3);
  CHECK(parsed["per_horizon"][0]["constants"].contains("eta"));
  CHECK(parsed["per_horizon"][0].contains("bounds"));
  std::remove("tmp_summary.json");
}

TEST_CASE("multi-family parsing rejects duplicates") {
  nlohmann::json j;
  j["families"] = {tiny_config_json(), tiny_config_json()};
  CHECK_THROWS_AS(parse_experiment_list(j), ConfigError);
  j["families"][1]["family"] = "other";
  CHECK(parse_experiment_list(j).size() == 2);
}

TEST_CASE("bound report puts the matching realization bound first") {
  auto j = nlohmann::json::parse(R"({"preset": "c-corrupted", "horizons": [1000000],
                                     "seeds": [1]})");
  const auto cfg = parse_experiment(j);
  const auto g = build_graph(cfg.graph);
  const auto p = build_partition(g, cfg.partition, cfg.graph);
  const auto bounds = bound_report(cfg, p, 1000000);
  REQUIRE(bounds.size() >= 2);
  CHECK(bounds[0].label == "corrupted-bound");
  CHECK(bounds[0].value == doctest::Approx(180000.0).epsilon(1e-12));
  CHECK(bounds[1].label == "adaptive-bound");

  auto j2 = nlohmann::json::parse(R"({"preset": "clique-union", "horizons": [10000],
                                      "seeds": [1]})");
  const auto cfg2 = parse_experiment(j2);
  const auto g2 = build_graph(cfg2.graph);
  const auto p2 = build_partition(g2, cfg2.partition, cfg2.graph);
  const auto bounds2 = bound_report(cfg2, p2, 10000);
  REQUIRE(bounds2.size() == 2);
  CHECK(bounds2[0].label == "well-clustered-bound");
  CHECK(bounds2[1].label == "clique-union-order");
}

TEST_CASE("baseline realization runs end to end") {
  auto j = tiny_config_json();
  j["realization"] = {{"mode", "baseline"}};
  j["horizons"] = {64};
  const auto result = run_family(parse_experiment(j));
  CHECK_FALSE(result.any_failed);
}

TEST_CASE("hybrid realization runs end to end") {
  auto j = tiny_config_json();
  j["realization"] = {{"mode", "hybrid"}, {"styles", {"dense", "sparse"}}};
  j["horizons"] = {128};
  const auto result = run_family(parse_experiment(j));
  CHECK_FALSE(result.any_failed);
  // Missing styles stay a config error at run time.
  j["realization"] = {{"mode", "hybrid"}};
  CHECK_THROWS_AS(run_family(parse_experiment(j)), ConfigError);
}

TEST_CASE("hypercube preset builds and runs") {
  auto j = nlohmann::json::parse(R"({"preset": "hypercube", "horizons": [64],
                                     "seeds": [1, 2]})");
  auto cfg = parse_experiment(j);
  cfg.graph.n = 3;  // keep the unit test small
  const auto result = run_family(cfg);
  CHECK_FALSE(result.any_failed);
}

TEST_CASE("realization overrides replace derived constants") {
  auto j = tiny_config_json();
  j["horizons"] = {256};
  j["realization"] = {{"mode", "well_clustered"},
                      {"overrides", {{"eta", 0.003}, {"alpha", 0.05}}}};
  const auto cfg = parse_experiment(j);
  REQUIRE(cfg.realization.overrides.eta.has_value());
  const auto g = build_graph(cfg.graph);
  const auto p = build_partition(g, cfg.partition, cfg.graph);
  const auto rc = build_schedule(p, cfg.realization.mode, 256, {}, cfg.realization.overrides);
  CHECK(rc.eta == 0.003);
  CHECK(rc.alpha == 0.05);
  // Dependent quantities derive from the final scalars.
  CHECK(rc.algo.psi.coords[0].rate == 0.003);
  double local_total = 0.0;
  for (double v : rc.static_exploration.local[0]) local_total += v;
  CHECK(local_total == doctest::Approx(0.05).epsilon(1e-12));
  // An un-overridden build differs.
  const auto plain = build_schedule(p, cfg.realization.mode, 256);
  CHECK(plain.eta != rc.eta);

  const auto result = run_family(cfg);
  CHECK_FALSE(result.any_failed);
  CHECK(result.horizons.front().constants["eta"] == 0.003);

  j["realization"]["overrides"] = {{"nope", 1.0}};
  CHECK_THROWS_AS(parse_experiment(j), ConfigError);
  j["realization"]["overrides"] = {{"eta", -1.0}};
  const auto bad = parse_experiment(j);
  CHECK_THROWS_AS(
      build_schedule(p, bad.realization.mode, 256, {}, bad.realization.overrides), ConfigError);
}

TEST_CASE("solver effort is accounted in the summary") {
  auto cfg = parse_experiment(tiny_config_json());
  const auto result = run_family(cfg);
  REQUIRE_FALSE(result.any_failed);
  const auto& hs = result.horizons.front();
  CHECK(hs.solver_calls > 0);
  CHECK(hs.solver_iterations >= hs.solver_calls);
  const auto summary = summary_json(result);
  CHECK(summary["per_horizon"][0]["solver_calls"] > 0);
}

TEST_CASE("preset regret stays below its analytical bound") {
  // The remaining presets (the acceptance suite covers clique-union and
  // c-corrupted at full scale): mean + 3 stderr within the bound, no guard
  // violations.
  for (const char* name : {"bipartite-union", "bounded-degree", "hypercube"}) {
    CAPTURE(name);
    nlohmann::json j;
    j["preset"] = name;
    j["horizons"] = {65536};
    j["seeds"] = {{"count", 10}, {"base", 1}};
    const auto result = run_family(parse_experiment(j));
    REQUIRE_FALSE(result.any_failed);
    const auto& hs = result.horizons.front();
    CHECK(hs.guard_violations == 0);
    CHECK(hs.gamma_over_half == 0);
    CHECK(hs.mean_regret + 3.0 * hs.stderr_regret <= hs.bounds.front().value);
  }
}
