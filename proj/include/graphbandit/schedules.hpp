#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "graphbandit/two_level.hpp"

namespace graphbandit {

enum class RealizationMode { well_clustered, adaptive, hybrid, baseline };
enum class BlockStyle { dense, sparse };

RealizationMode parse_mode(const std::string& name);
const char* to_string(RealizationMode mode);

// All derived constants of one realization at one horizon. Pure function of
// (partition, mode, styles, T); immutable once built.
struct RealizationConfig {
  RealizationMode mode = RealizationMode::well_clustered;
  int64_t horizon = 0;

  double eta = 0.0;        // projection rate on U2 coordinates
  double eta_s = 0.0;      // projection rate on U1^S coordinates
  double eta_sbar = 0.0;   // projection rate on U1^Sbar coordinates
  double alpha = 0.0;      // local exploration total per U2 block
  double beta_dense = 0.0; // global exploration scale, dense blocks
  double beta_sparse = 0.0;// global exploration scale, sparse blocks
  std::vector<double> eta_block;   // per-block restriction step
  std::vector<BlockStyle> style;   // per block (meaningful on U2)

  TwoLevelConfig algo;
  Exploration static_exploration;  // fixed factors; sparse-block globals filled per round
  bool has_adaptive_global = false;

  double gamma_static_total = 0.0;   // total of the fixed global factors
  double gamma_adaptive_bound = 0.0; // worst case of the per-round adaptive part
  double gamma_local_max = 0.0;      // max over blocks of the local total
  bool gamma_ok = false;             // all totals <= 1/2 at this horizon
  int64_t safe_horizon = -1;         // minimal T with all totals <= 1/2

  std::unique_ptr<ExplorationProvider> make_provider(const LegalPartition& p) const;
};

// Negative-entropy restriction potentials with static global exploration
// proportional to x* log n / delta-bar; Tsallis/negentropy projection split.
RealizationConfig well_clustered_schedule(const LegalPartition& p, int64_t T);

// Tsallis restriction potentials with per-round global exploration driven by
// sqrt of the current block distributions. Requires a multi-vertex block.
RealizationConfig adaptive_schedule(const LegalPartition& p, int64_t T);

// Per-block choice between the two styles; a style is required for every
// multi-vertex block. Uniform choices collapse bit-identically to the pure
// schedules.
RealizationConfig hybrid_schedule(const LegalPartition& p, int64_t T,
                                  const std::vector<BlockStyle>& styles);

struct BaselineRealization {
  LegalPartition partition;  // single block covering V
  RealizationConfig config;
};

// Whole-graph single-block comparison baseline (prior-work style OSMD).
BaselineRealization baseline_schedule(const FeedbackGraph& g, int64_t T);

// Optional replacements for the derived scalars; anything dependent on an
// overridden value (step sizes, exploration factors, potential rates) is
// recomputed from the final scalars.
struct ScheduleOverrides {
  std::optional<double> eta, eta_s, eta_sbar, alpha, beta_dense, beta_sparse;
  std::optional<std::vector<double>> eta_block;
};

RealizationConfig build_schedule(const LegalPartition& p, RealizationMode mode, int64_t T,
                                 const std::vector<BlockStyle>& styles = {},
                                 const ScheduleOverrides& overrides = {});

// Minimal horizon at which every exploration total drops to <= 1/2.
int64_t exploration_safe_horizon(const LegalPartition& p, RealizationMode mode,
                                 const std::vector<BlockStyle>& styles = {});

struct BoundValue {
  std::string label;
  double value = 0.0;
};

// Exact analytical regret-bound formulas for the realization; the first entry
// is the primary bound. The adaptive formula substitutes max block size for
// the (unknowable) optimal arm's block size.
std::vector<BoundValue> regret_bounds(const LegalPartition& p, RealizationMode mode,
                                       int64_t T);

// Corrupted strongly observable graphs: 9 (4C)^{1/3} T^{2/3}.
double corrupted_bound(int corrupted_count, int64_t T);

// Clique-union order term (sum_k log n_k)^{1/3} T^{2/3}.
double clique_union_order(const LegalPartition& p, int64_t T);

}  // namespace graphbandit
