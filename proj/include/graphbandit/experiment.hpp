#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "graphbandit/env.hpp"
#include "json.hpp"

namespace graphbandit {

struct GraphSpec {
  std::string file;
  std::string generator;  // mab | clique_union | bipartite_union | directed_cycle |
                          // undirected_cycle | hypercube | loopy_star | corrupted_mab
  std::vector<int> sizes;
  int n = 0;
  int leaves = 0;
  int clean = 0;
  int corrupted = 0;
};

struct PartitionSpec {
  std::string method = "components";  // singletons | components | c-corrupted |
                                      // hypercube | trivial | file
  std::string file;
};

struct RealizationSpec {
  RealizationMode mode = RealizationMode::well_clustered;
  std::vector<std::string> styles;  // hybrid: dense/sparse per U2 block (or per block)
  ScheduleOverrides overrides;      // optional replacements for derived constants
};

struct ExperimentConfig {
  std::string family = "experiment";
  GraphSpec graph;
  PartitionSpec partition;
  RealizationSpec realization;
  AdversarySpec adversary;
  std::string adversary_csv;  // fixed_sequence loss table, loaded lazily
  std::vector<int64_t> horizons;
  std::vector<uint64_t> seeds;
  int checkpoints = 32;
  int threads = 0;
};

FeedbackGraph build_graph(const GraphSpec& spec);
LegalPartition build_partition(const FeedbackGraph& g, const PartitionSpec& spec,
                               const GraphSpec& graph_spec);

// Parses one family config; `preset` entries are expanded first and remaining
// keys override the preset's defaults. Throws ConfigError.
ExperimentConfig parse_experiment(const nlohmann::json& j);
// Multi-family configs: {"families": [...]} or a single family object.
std::vector<ExperimentConfig> parse_experiment_list(const nlohmann::json& j);
nlohmann::ordered_json preset_json(const std::string& name);

struct FitResult {
  bool defined = false;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS log-space residual
  std::string reason;     // set when undefined
};

// Ordinary least squares on (log T, log mean regret). Needs >= 3 points with
// positive regrets; otherwise flagged undefined, never thrown.
FitResult fit_exponent(std::span<const std::pair<double, double>> points);

struct HorizonSummary {
  int64_t horizon = 0;
  double mean_regret = 0.0;
  double stderr_regret = 0.0;
  int64_t guard_violations = 0;
  int64_t gamma_over_half = 0;
  int64_t w_bound_violations = 0;
  double gamma_bar_max = 0.0;
  int64_t solver_calls = 0;
  int64_t solver_iterations = 0;
  bool gamma_ok = false;
  int64_t safe_horizon = -1;
  std::vector<BoundValue> bounds;
  nlohmann::ordered_json constants;
};

struct FamilyResult {
  std::string family;
  ExperimentConfig config;
  std::vector<RunRecord> runs;  // sorted by (horizon, seed)
  std::vector<HorizonSummary> horizons;
  FitResult fit;
  bool any_failed = false;
};

// Executes every (horizon, seed) pair on a worker pool; aggregation order is
// deterministic regardless of scheduling.
FamilyResult run_family(const ExperimentConfig& config);

// Analytical bound values for the configured realization; the first entry is
// the one measured regret is compared against (the corrupted-count form when
// the c-corrupted partition is in play).
std::vector<BoundValue> bound_report(const ExperimentConfig& config, const LegalPartition& p,
                                     int64_t horizon);

// CSV columns: family,T,seed,checkpoint_t,regret (one row per checkpoint).
void write_csv(const std::string& path, std::span<const FamilyResult> results);
nlohmann::ordered_json summary_json(const FamilyResult& result);
void write_summary(const std::string& path, std::span<const FamilyResult> results);

// Re-fit from an emitted CSV: per family, final-checkpoint regret per run,
// mean over seeds per horizon, then fit_exponent.
std::vector<std::pair<std::string, FitResult>> fit_from_csv(const std::string& path);

}  // namespace graphbandit
