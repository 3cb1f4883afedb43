#include "graphbandit/env.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "graphbandit/errors.hpp"
#include "graphbandit/rng.hpp"

namespace graphbandit {

namespace {
// Sub-stream roles derived from the run seed.
constexpr uint64_t kStreamPlayer = 1;
constexpr uint64_t kStreamAdversary = 2;
constexpr uint64_t kStreamAdversarySetup = 3;
}  // namespace

AdversarySpec AdversarySpec::constant(double value) {
  AdversarySpec s;
  s.kind = AdversaryKind::constant;
  s.constant_value = value;
  return s;
}

AdversarySpec AdversarySpec::stochastic(double gap, int best_arm) {
  AdversarySpec s;
  s.kind = AdversaryKind::stochastic_gap;
  s.gap = gap;
  s.best_arm = best_arm;
  return s;
}

AdversarySpec AdversarySpec::from_csv(const std::string& path, int num_arms) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open loss table: " + path);
  AdversarySpec s;
  s.kind = AdversaryKind::fixed_sequence;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    int cols = 0;
    while (std::getline(row, cell, ',')) {
      s.table.push_back(std::stod(cell));
      ++cols;
    }
    if (cols != num_arms) {
      throw ConfigError("loss table row has " + std::to_string(cols) + " columns, expected " +
                        std::to_string(num_arms));
    }
    ++s.table_rows;
  }
  return s;
}

Adversary::Adversary(const AdversarySpec& spec, int num_arms, uint64_t seed)
    : spec_(spec), num_arms_(num_arms), seed_(seed) {
  switch (spec_.kind) {
    case AdversaryKind::constant:
      if (spec_.constant_value < 0.0 || spec_.constant_value > 1.0) {
        throw ConfigError("constant loss outside [0,1]");
      }
      break;
    case AdversaryKind::stochastic_gap: {
      if (spec_.gap < 0.0 || spec_.gap > 0.5) throw ConfigError("gap must lie in [0, 0.5]");
      if (spec_.best_arm >= num_arms) throw ConfigError("best_arm out of range");
      if (spec_.best_arm >= 0) {
        planted_best_ = spec_.best_arm;
      } else {
        const double u = philox_uniform_at(seed_, kStreamAdversarySetup, 0);
        planted_best_ = std::min(num_arms_ - 1, static_cast<int>(u * num_arms_));
      }
      break;
    }
    case AdversaryKind::fixed_sequence:
      if (spec_.table_rows * num_arms_ != static_cast<int64_t>(spec_.table.size())) {
        throw ConfigError("loss table shape mismatch");
      }
      for (double v : spec_.table) {
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("loss table entry outside [0,1]");
      }
      break;
  }
}

void Adversary::loss_vector(int64_t t, std::vector<double>& out) const {
  out.assign(num_arms_, 0.0);
  switch (spec_.kind) {
    case AdversaryKind::constant:
      std::fill(out.begin(), out.end(), spec_.constant_value);
      break;
    case AdversaryKind::stochastic_gap: {
      for (int a = 0; a < num_arms_; ++a) {
        const double p_one = a == planted_best_ ? 0.5 - spec_.gap : 0.5;
        const uint64_t index =
            static_cast<uint64_t>(t) * static_cast<uint64_t>(num_arms_) + static_cast<uint64_t>(a);
        out[a] = philox_uniform_at(seed_, kStreamAdversary, index) < p_one ? 1.0 : 0.0;
      }
      break;
    }
    case AdversaryKind::fixed_sequence: {
      if (t < 1 || t > spec_.table_rows) {
        throw RunFailure("fixed_sequence adversary has no row for round " + std::to_string(t));
      }
      const auto base = static_cast<size_t>((t - 1) * num_arms_);
      std::copy_n(spec_.table.begin() + base, num_arms_, out.begin());
      break;
    }
  }
  for (double v : out) {
    if (!(v >= 0.0 && v <= 1.0)) throw RunFailure("adversary emitted a loss outside [0,1]");
  }
}

Reveal reveal(const Adversary& adv, const FeedbackGraph& g, int64_t t, int played) {
  Reveal r;
  adv.loss_vector(t, r.full);
  for (int a : g.out_neighbors(played)) {
    r.observed_arms.push_back(a);
    r.observed_losses.push_back(r.full[a]);
  }
  return r;
}

std::vector<int64_t> geometric_checkpoints(int64_t horizon, int points) {
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  std::vector<int64_t> ts;
  for (int i = 1; i <= points; ++i) {
    const double e = static_cast<double>(i) / points;
    auto t = static_cast<int64_t>(std::llround(std::pow(static_cast<double>(horizon), e)));
    ts.push_back(std::clamp<int64_t>(t, 1, horizon));
  }
  ts.push_back(horizon);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

RunRecord play_game(const LegalPartition& p, const RealizationConfig& realization,
                    const AdversarySpec& adversary, int64_t horizon, uint64_t seed,
                    std::span<const int64_t> checkpoints) {
  RunRecord rec;
  rec.seed = seed;
  rec.horizon = horizon;
  int64_t current_round = 0;  // 0 = setup
  try {
    if (classify(p.graph()).graph == Observability::non_observable) {
      throw ConfigError("instance is non-observable: some arm can never be estimated");
    }
    const Adversary adv(adversary, p.num_arms(), seed);
    Philox player_rng(seed, kStreamPlayer);
    auto provider = realization.make_provider(p);
    TwoLevelState state = initial_state(p, realization.algo);

    std::vector<double> losses(p.num_arms());
    std::vector<double> cum_arm(p.num_arms(), 0.0);
    double cum_player = 0.0;
    size_t next_cp = 0;

    for (int64_t t = 1; t <= horizon; ++t) {
      current_round = t;
      // Losses are drawn before the arm so the adversary stays oblivious.
      adv.loss_vector(t, losses);
      const RoundResult rr = run_round(p, realization.algo, *provider, state, losses,
                                       player_rng.next_double(), rec.diag);
      cum_player += rr.loss_paid;
      for (int a = 0; a < p.num_arms(); ++a) cum_arm[a] += losses[a];
      while (next_cp < checkpoints.size() && checkpoints[next_cp] == t) {
        Checkpoint cp;
        cp.t = t;
        cp.player_loss = cum_player;
        cp.best_arm_loss = *std::min_element(cum_arm.begin(), cum_arm.end());
        cp.regret = cp.player_loss - cp.best_arm_loss;
        rec.checkpoints.push_back(cp);
        ++next_cp;
      }
    }
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.failed_round = current_round;
    rec.error = e.what();
  }
  return rec;
}

}  // namespace graphbandit
