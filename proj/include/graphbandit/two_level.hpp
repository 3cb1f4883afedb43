#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "graphbandit/partition.hpp"
#include "graphbandit/potentials.hpp"

namespace graphbandit {

// Exploration factors for one round: `global` is indexed by global arm id,
// `local` by block id (empty for singleton blocks).
struct Exploration {
  std::vector<double> global;
  std::vector<std::vector<double>> local;
};

struct TwoLevelState;

// Supplies the round-t exploration. Static realizations return a fixed
// object; the adaptive realization recomputes the global factors from the
// current block distributions. One provider per run (not shared).
class ExplorationProvider {
 public:
  virtual ~ExplorationProvider() = default;
  virtual const Exploration& round_exploration(const TwoLevelState& state) = 0;
};

// Potentials and step sizes binding the algorithm to one realization.
struct TwoLevelConfig {
  SeparablePotential psi;            // projection potential, rates folded, step 1
  std::vector<PotentialSpec> phi;    // per block, rate 1 (meaningful for U2)
  std::vector<double> eta_block;     // per block step (meaningful for U2)
  double guard_max_rate = 0.0;       // max{eta, eta_S, eta_Sbar} for the -1/4 guard
};

struct TwoLevelState {
  int64_t round = 1;
  std::vector<double> y;               // distribution over blocks
  std::vector<std::vector<double>> x;  // per-block distributions; {1} for U1
};

// Y = argmin of psi over the simplex, X uniform per multi-vertex block.
TwoLevelState initial_state(const LegalPartition& p, const TwoLevelConfig& cfg);

struct RoundPlan {
  std::vector<std::vector<double>> x_tilde;  // per block; equals x for U1
  std::vector<double> z;                     // play distribution over global arms
  Exploration gamma;
  double gamma_total = 0.0;
  std::vector<double> gamma_local_total;     // per block
};

// Diagnostics accumulated over a run; guard violations are counted, not
// fatal (the schedules only guarantee the guards for large T).
struct RoundDiagnostics {
  int64_t guard_violations = 0;   // min L' * max rate < -1/4
  int64_t gamma_over_half = 0;    // some exploration total above 1/2
  double gamma_bar_max = 0.0;
  int64_t w_bound_violations = 0; // W(i) > 4 Y(i) while the guard held
  MirrorStepStats solver;         // dual-solve effort across all mirror steps
};

// Deterministic given the state. Throws ConfigError when an exploration
// total exceeds 1 and RunFailure when Z fails to normalize.
RoundPlan plan_round(const LegalPartition& p, const TwoLevelState& state,
                     const Exploration& gamma);

// Inverse-CDF draw from plan.z; u uniform in [0,1).
int sample_arm(const RoundPlan& plan, double u);

// Importance-weighted estimator: for observed arms (the out-neighborhood of
// `played`), losses[a] / P(a) with P(a) the total play mass observing a;
// zero elsewhere. Only observed entries of `losses` are read.
std::vector<double> estimate_losses(const FeedbackGraph& g, std::span<const double> z,
                                    int played, std::span<const double> losses);

struct BlockLosses {
  std::vector<double> lhat;     // per block
  double shift_c = 0.0;         // sum over U1^Sbar of lhat * y
  std::vector<double> shifted;  // lhat - shift_c
};

// `y` is the round-t block distribution (feeds the shift c).
BlockLosses block_losses(const LegalPartition& p, const RoundPlan& plan,
                         std::span<const double> ellhat, std::span<const double> y);

// Mirror updates for Y and the touched U2 blocks; advances the round counter.
void update_state(const LegalPartition& p, const TwoLevelConfig& cfg, TwoLevelState& state,
                  std::span<const double> ellhat, const BlockLosses& bl,
                  RoundDiagnostics& diag);

struct RoundResult {
  int played = -1;
  double loss_paid = 0.0;
};

// One full round: plan, sample, estimate, aggregate, update. `losses` is the
// simulator-side full loss vector for round t (generated obliviously).
RoundResult run_round(const LegalPartition& p, const TwoLevelConfig& cfg,
                      ExplorationProvider& explore, TwoLevelState& state,
                      std::span<const double> losses, double uniform_draw,
                      RoundDiagnostics& diag);

}  // namespace graphbandit
