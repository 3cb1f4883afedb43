#include "graphbandit/two_level.hpp"

#include <algorithm>
#include <cmath>

#include "graphbandit/errors.hpp"
#include "graphbandit/rng.hpp"

namespace graphbandit {

TwoLevelState initial_state(const LegalPartition& p, const TwoLevelConfig& cfg) {
  TwoLevelState s;
  s.round = 1;
  s.y = potential_argmin(cfg.psi);
  s.x.resize(p.num_blocks());
  for (int k = 0; k < p.num_blocks(); ++k) {
    const int nk = p.block_size(k);
    s.x[k].assign(nk, 1.0 / static_cast<double>(nk));
  }
  return s;
}

RoundPlan plan_round(const LegalPartition& p, const TwoLevelState& state,
                     const Exploration& gamma) {
  const int m = p.num_blocks();
  const int n = p.num_arms();
  RoundPlan plan;
  plan.gamma = gamma;
  plan.gamma_local_total.assign(m, 0.0);
  for (double g : gamma.global) plan.gamma_total += g;
  if (plan.gamma_total > 1.0) {
    throw ConfigError("global exploration total exceeds 1");
  }
  if (static_cast<int>(gamma.global.size()) != n ||
      static_cast<int>(gamma.local.size()) != m) {
    throw ConfigError("exploration factors do not match the partition shape");
  }
  plan.x_tilde.resize(m);
  for (int k = 0; k < m; ++k) {
    if (!p.in_u2(k)) {
      plan.x_tilde[k] = state.x[k];
      continue;
    }
    const auto& local = gamma.local[k];
    if (static_cast<int>(local.size()) != p.block_size(k)) {
      throw ConfigError("local exploration does not match block " + std::to_string(k));
    }
    double total = 0.0;
    for (double g : local) total += g;
    if (total > 1.0) {
      throw ConfigError("local exploration total exceeds 1 in block " + std::to_string(k));
    }
    plan.gamma_local_total[k] = total;
    const int nk = p.block_size(k);
    plan.x_tilde[k].resize(nk);
    for (int j = 0; j < nk; ++j) {
      plan.x_tilde[k][j] = (1.0 - total) * state.x[k][j] + local[j];
    }
  }
  plan.z.assign(n, 0.0);
  const double keep = 1.0 - plan.gamma_total;
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < p.block_size(k); ++j) {
      const int a = p.arm(k, j);
      plan.z[a] = keep * state.y[k] * plan.x_tilde[k][j] + gamma.global[a];
    }
  }
  double zsum = 0.0;
  for (double v : plan.z) zsum += v;
  if (std::abs(zsum - 1.0) > 1e-7) {
    throw RunFailure("play distribution failed to normalize (sum " + std::to_string(zsum) + ")");
  }
  return plan;
}

int sample_arm(const RoundPlan& plan, double u) {
  return sample_discrete(plan.z, u);
}

std::vector<double> estimate_losses(const FeedbackGraph& g, std::span<const double> z,
                                    int played, std::span<const double> losses) {
  std::vector<double> ellhat(g.num_vertices(), 0.0);
  for (int a : g.out_neighbors(played)) {
    double p_obs = 0.0;
    for (int u : g.in_neighbors(a)) p_obs += z[u];
    if (!(p_obs > 0.0)) {
      throw RunFailure("observed arm has zero observation probability");
    }
    if (!std::isfinite(losses[a])) throw RunFailure("non-finite loss revealed");
    ellhat[a] = losses[a] / p_obs;
  }
  return ellhat;
}

BlockLosses block_losses(const LegalPartition& p, const RoundPlan& plan,
                         std::span<const double> ellhat, std::span<const double> y) {
  const int m = p.num_blocks();
  BlockLosses bl;
  bl.lhat.assign(m, 0.0);
  for (int k = 0; k < m; ++k) {
    if (p.in_u2(k)) {
      double acc = 0.0;
      for (int j = 0; j < p.block_size(k); ++j) {
        acc += plan.x_tilde[k][j] * ellhat[p.arm(k, j)];
      }
      bl.lhat[k] = acc;
    } else {
      bl.lhat[k] = ellhat[p.arm(k, 0)];
    }
  }
  bl.shift_c = 0.0;
  for (int k : p.u1sbar()) bl.shift_c += bl.lhat[k] * y[k];
  bl.shifted.resize(m);
  for (int k = 0; k < m; ++k) bl.shifted[k] = bl.lhat[k] - bl.shift_c;
  return bl;
}

void update_state(const LegalPartition& p, const TwoLevelConfig& cfg, TwoLevelState& state,
                  std::span<const double> ellhat, const BlockLosses& bl,
                  RoundDiagnostics& diag) {
  const int m = p.num_blocks();
  // Step-size guard on the shifted losses; violations are counted and the run proceeds.
  double min_shifted = 0.0;
  for (double v : bl.shifted) min_shifted = std::min(min_shifted, v);
  const bool guard_ok = min_shifted * cfg.guard_max_rate >= -0.25;
  if (!guard_ok) {
    ++diag.guard_violations;
  } else {
    const auto w = unconstrained_step(state.y, bl.shifted, cfg.psi);
    for (int k = 0; k < m; ++k) {
      if (w[k] > 4.0 * state.y[k] + 1e-12) ++diag.w_bound_violations;
    }
  }

  state.y = mirror_step_simplex(state.y, bl.shifted, cfg.psi, 1.0, &diag.solver);

  std::vector<double> block_loss;
  for (int k : p.u2()) {
    const int nk = p.block_size(k);
    bool touched = false;
    block_loss.assign(nk, 0.0);
    for (int j = 0; j < nk; ++j) {
      block_loss[j] = ellhat[p.arm(k, j)];
      touched = touched || block_loss[j] != 0.0;
    }
    if (!touched) continue;  // zero loss vector: the mirror step is the identity
    state.x[k] = mirror_step_simplex(state.x[k], block_loss,
                                     SeparablePotential::uniform(cfg.phi[k], nk),
                                     cfg.eta_block[k], &diag.solver);
  }
  ++state.round;
}

RoundResult run_round(const LegalPartition& p, const TwoLevelConfig& cfg,
                      ExplorationProvider& explore, TwoLevelState& state,
                      std::span<const double> losses, double uniform_draw,
                      RoundDiagnostics& diag) {
  const Exploration& gamma = explore.round_exploration(state);
  RoundPlan plan = plan_round(p, state, gamma);

  bool over_half = plan.gamma_total > 0.5;
  for (int k : p.u2()) over_half = over_half || plan.gamma_local_total[k] > 0.5;
  if (over_half) ++diag.gamma_over_half;
  diag.gamma_bar_max = std::max(diag.gamma_bar_max, plan.gamma_total);

  const int played = sample_arm(plan, uniform_draw);
  const auto ellhat = estimate_losses(p.graph(), plan.z, played, losses);
  BlockLosses bl = block_losses(p, plan, ellhat, state.y);
  update_state(p, cfg, state, ellhat, bl, diag);
  return {played, losses[played]};
}

}  // namespace graphbandit
