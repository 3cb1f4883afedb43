#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "graphbandit/schedules.hpp"

namespace graphbandit {

enum class AdversaryKind { constant, stochastic_gap, fixed_sequence };

struct AdversarySpec {
  AdversaryKind kind = AdversaryKind::stochastic_gap;
  double constant_value = 0.5;
  // stochastic_gap: best arm Bernoulli(0.5 - gap), others Bernoulli(0.5);
  // best_arm = -1 draws it uniformly per seed.
  double gap = 0.1;
  int best_arm = -1;
  // fixed_sequence: row-major rows x num_arms loss table.
  std::vector<double> table;
  int64_t table_rows = 0;

  static AdversarySpec constant(double value);
  static AdversarySpec stochastic(double gap, int best_arm = -1);
  static AdversarySpec from_csv(const std::string& path, int num_arms);
};

// Oblivious adversary: the round-t loss vector is a pure function of
// (spec, seed, t), generated with addressed draws, so it cannot depend on the
// played arm or on query order.
class Adversary {
 public:
  Adversary(const AdversarySpec& spec, int num_arms, uint64_t seed);
  int num_arms() const { return num_arms_; }
  int planted_best_arm() const { return planted_best_; }  // -1 unless stochastic_gap
  // t is 1-based. Throws RunFailure if a loss leaves [0,1].
  void loss_vector(int64_t t, std::vector<double>& out) const;

 private:
  AdversarySpec spec_;
  int num_arms_;
  uint64_t seed_;
  int planted_best_ = -1;
};

struct Reveal {
  std::vector<double> full;            // simulator-side full vector
  std::vector<int> observed_arms;      // exactly N_out(played)
  std::vector<double> observed_losses;
};

Reveal reveal(const Adversary& adv, const FeedbackGraph& g, int64_t t, int played);

struct Checkpoint {
  int64_t t = 0;
  double player_loss = 0.0;
  double best_arm_loss = 0.0;
  double regret = 0.0;
};

struct RunRecord {
  uint64_t seed = 0;
  int64_t horizon = 0;
  std::vector<Checkpoint> checkpoints;
  RoundDiagnostics diag;
  bool failed = false;
  int64_t failed_round = -1;
  std::string error;
};

// Geometrically spaced checkpoint rounds, deduplicated, always ending at T.
std::vector<int64_t> geometric_checkpoints(int64_t horizon, int points = 32);

// T rounds of the two-level algorithm against the adversary. Regret at a
// checkpoint is cumulative player loss minus the best fixed arm's cumulative
// loss, from full loss knowledge. Failures are recorded, not thrown.
RunRecord play_game(const LegalPartition& p, const RealizationConfig& realization,
                    const AdversarySpec& adversary, int64_t horizon, uint64_t seed,
                    std::span<const int64_t> checkpoints);

}  // namespace graphbandit
