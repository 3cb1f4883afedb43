#include "graphbandit/schedules.hpp"

#include <algorithm>
#include <cmath>

#include "graphbandit/errors.hpp"

namespace graphbandit {

RealizationMode parse_mode(const std::string& name) {
  if (name == "well_clustered" || name == "well-clustered") return RealizationMode::well_clustered;
  if (name == "adaptive") return RealizationMode::adaptive;
  if (name == "hybrid") return RealizationMode::hybrid;
  if (name == "baseline") return RealizationMode::baseline;
  throw ConfigError("unknown realization mode: " + name);
}

const char* to_string(RealizationMode mode) {
  switch (mode) {
    case RealizationMode::well_clustered: return "well_clustered";
    case RealizationMode::adaptive: return "adaptive";
    case RealizationMode::hybrid: return "hybrid";
    case RealizationMode::baseline: return "baseline";
  }
  return "?";
}

namespace {

struct PartitionStats {
  int u1s = 0, u1sbar = 0, u2 = 0;
  double sum_delta_sq = 0.0;       // over U2
  double delta_bar = 0.0;          // over U2
  double dense_delta_log = 0.0;    // sum delta* log n over dense blocks
  double sparse_sqrt_n = 0.0;      // sum sqrt(n) over sparse blocks
  double sparse_n_max = 0.0;       // max n over sparse blocks
};

PartitionStats collect_stats(const LegalPartition& p, const std::vector<BlockStyle>& style) {
  PartitionStats st;
  st.u1s = static_cast<int>(p.u1s().size());
  st.u1sbar = static_cast<int>(p.u1sbar().size());
  st.u2 = static_cast<int>(p.u2().size());
  st.delta_bar = p.delta_bar_star();
  for (int k : p.u2()) {
    const double d = p.block_lp(k).delta_star;
    const double n = p.block_size(k);
    st.sum_delta_sq += d * d;
    if (style[k] == BlockStyle::dense) {
      st.dense_delta_log += d * std::log(n);
    } else {
      st.sparse_sqrt_n += std::sqrt(n);
      st.sparse_n_max = std::max(st.sparse_n_max, n);
    }
  }
  return st;
}

// Worst case over the simplex of the adaptive per-round global total in one
// block: (beta / delta_bar) * sqrt(sum_i s_i^2) with s_i the x* mass of the
// in-block in-neighborhood of i (Cauchy-Schwarz, tight at X propto s^2).
double adaptive_block_bound(const LegalPartition& p, int k) {
  const auto& g = p.graph();
  const auto& blk = p.blocks()[k];
  const auto& w = p.block_lp(k).weights;
  double sum_sq = 0.0;
  for (int i : blk) {
    double s = 0.0;
    for (int u : g.in_neighbors(i)) {
      if (p.block_of(u) == k) s += w[p.index_in_block(u)];
    }
    sum_sq += s * s;
  }
  return std::sqrt(sum_sq);
}

}  // namespace

RealizationConfig build_schedule(const LegalPartition& p, RealizationMode mode, int64_t T,
                                 const std::vector<BlockStyle>& styles,
                                 const ScheduleOverrides& overrides) {
  if (T < 1) throw ConfigError("horizon must be >= 1");
  const int m = p.num_blocks();

  RealizationConfig cfg;
  cfg.mode = mode;
  cfg.horizon = T;
  cfg.style.assign(m, BlockStyle::dense);
  switch (mode) {
    case RealizationMode::well_clustered:
    case RealizationMode::baseline:
      break;
    case RealizationMode::adaptive:
      if (p.u2().empty()) {
        throw ConfigError("adaptive realization requires a multi-vertex block");
      }
      cfg.style.assign(m, BlockStyle::sparse);
      break;
    case RealizationMode::hybrid:
      if (static_cast<int>(styles.size()) != m) {
        throw ConfigError("hybrid realization needs a style for every block");
      }
      cfg.style = styles;
      break;
  }

  const PartitionStats st = collect_stats(p, cfg.style);
  const double tf = static_cast<double>(T);

  // Projection-instance constants, by the case split on U2 and U1^Sbar.
  if (st.u1sbar > 0) {
    cfg.eta_sbar = std::sqrt(std::log(static_cast<double>(st.u1sbar) + 1.0) / (10.0 * tf));
  }
  if (st.u2 == 0) {
    // Strongly observable case: eta_S couples to the realized global total.
    const double eta_sbar_eff = overrides.eta_sbar.value_or(cfg.eta_sbar);
    double gamma_bar = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double denom = 2.0 / (1.0 - std::min(gamma_bar, 0.5)) + (st.u1sbar > 0 ? 20.0 : 0.0);
      cfg.eta_s = std::sqrt(1.0 / (denom * tf));
      double next = 0.0;
      if (st.u1sbar > 0) {
        if (st.u1s > 0) next += 4.0 * overrides.eta_s.value_or(cfg.eta_s);
        if (st.u1sbar > 1) {
          next += 4.0 * eta_sbar_eff * st.u1sbar / (st.u1sbar - 1.0);
        }
      }
      if (std::abs(next - gamma_bar) < 1e-15) break;
      gamma_bar = next;
    }
  } else {
    const double core = st.u2 * st.sum_delta_sq;
    if (st.u1sbar == 0) {
      cfg.alpha = std::pow(2.0, 2.0 / 3.0) * std::pow(core, 1.0 / 6.0) / std::cbrt(tf);
      cfg.alpha = overrides.alpha.value_or(cfg.alpha);
      cfg.eta = 0.5 * std::pow(st.u2 / st.sum_delta_sq, 0.25) * std::sqrt(cfg.alpha / tf);
      cfg.eta_s = 1.0 / std::sqrt(4.0 * tf);
    } else {
      cfg.alpha = std::pow(2.0, 4.0 / 3.0) * std::pow(core, 1.0 / 6.0) / std::cbrt(tf);
      cfg.alpha = overrides.alpha.value_or(cfg.alpha);
      cfg.eta = 0.25 * std::pow(st.u2 / st.sum_delta_sq, 0.25) * std::sqrt(cfg.alpha / tf);
      cfg.eta_s = 1.0 / (2.0 * std::sqrt(6.0 * tf));
    }
  }

  // Restriction-side scales per style group.
  if (st.dense_delta_log > 0.0) {
    cfg.beta_dense = st.delta_bar / (std::cbrt(2.0 * tf) * std::pow(st.dense_delta_log, 2.0 / 3.0));
  }
  if (st.sparse_sqrt_n > 0.0) {
    cfg.beta_sparse = std::cbrt(2.0) * st.delta_bar * std::pow(st.sparse_n_max, 1.0 / 6.0) /
                      (std::cbrt(tf) * std::pow(st.sparse_sqrt_n, 2.0 / 3.0));
  }

  // Everything below derives from the final scalars.
  auto apply = [](std::optional<double> ov, double& target, const char* name) {
    if (!ov) return;
    if (!(*ov > 0.0)) throw ConfigError(std::string("override ") + name + " must be positive");
    target = *ov;
  };
  apply(overrides.eta, cfg.eta, "eta");
  apply(overrides.eta_s, cfg.eta_s, "eta_s");
  apply(overrides.eta_sbar, cfg.eta_sbar, "eta_sbar");
  apply(overrides.alpha, cfg.alpha, "alpha");
  apply(overrides.beta_dense, cfg.beta_dense, "beta_dense");
  apply(overrides.beta_sparse, cfg.beta_sparse, "beta_sparse");

  double g_u1s_each = 0.0, g_u1sbar_each = 0.0;
  if (st.u1sbar > 0) {
    if (st.u1s > 0) g_u1s_each = 4.0 * cfg.eta_s / st.u1s;
    if (st.u1sbar > 1) g_u1sbar_each = 4.0 * cfg.eta_sbar / (st.u1sbar - 1.0);
  }

  // Potentials, per-block steps and static exploration.
  cfg.algo.psi.coords.resize(m);
  cfg.algo.phi.resize(m);
  cfg.algo.eta_block.assign(m, 0.0);
  cfg.eta_block.assign(m, 0.0);
  cfg.static_exploration.global.assign(p.num_arms(), 0.0);
  cfg.static_exploration.local.resize(m);

  for (int k : p.u1s()) {
    cfg.algo.psi.coords[k] = {PotentialKind::tsallis_half, cfg.eta_s};
    cfg.static_exploration.global[p.arm(k, 0)] = g_u1s_each;
  }
  for (int k : p.u1sbar()) {
    cfg.algo.psi.coords[k] = {PotentialKind::negative_entropy, cfg.eta_sbar};
    cfg.static_exploration.global[p.arm(k, 0)] = g_u1sbar_each;
  }
  for (int k : p.u2()) {
    cfg.algo.psi.coords[k] = {PotentialKind::tsallis_half, cfg.eta};
    const auto& lp = p.block_lp(k);
    const int nk = p.block_size(k);
    const double logn = std::log(static_cast<double>(nk));
    auto& local = cfg.static_exploration.local[k];
    local.assign(nk, 0.0);
    for (int j = 0; j < nk; ++j) {
      local[j] = lp.weights[j] / lp.delta_star * cfg.alpha;
    }
    if (cfg.style[k] == BlockStyle::dense) {
      cfg.algo.phi[k] = {PotentialKind::negative_entropy, 1.0};
      cfg.eta_block[k] = std::sqrt(2.0 * cfg.beta_dense) * logn / std::sqrt(st.delta_bar * tf);
      for (int j = 0; j < nk; ++j) {
        cfg.static_exploration.global[p.arm(k, j)] =
            lp.weights[j] * logn / st.delta_bar * cfg.beta_dense;
      }
    } else {
      cfg.algo.phi[k] = {PotentialKind::tsallis_half, 1.0};
      cfg.eta_block[k] =
          std::sqrt(cfg.beta_sparse * std::sqrt(static_cast<double>(nk)) / (2.0 * tf * st.delta_bar));
      cfg.has_adaptive_global = true;
    }
  }
  if (overrides.eta_block) {
    if (static_cast<int>(overrides.eta_block->size()) != m) {
      throw ConfigError("eta_block override must list one entry per block");
    }
    for (int k : p.u2()) {
      if (!((*overrides.eta_block)[k] > 0.0)) {
        throw ConfigError("eta_block override entries must be positive on multi-vertex blocks");
      }
    }
    cfg.eta_block = *overrides.eta_block;
  }
  cfg.algo.eta_block = cfg.eta_block;
  cfg.algo.guard_max_rate = std::max({st.u2 > 0 ? cfg.eta : 0.0,
                                      st.u1s > 0 ? cfg.eta_s : 0.0,
                                      st.u1sbar > 0 ? cfg.eta_sbar : 0.0});

  for (double g : cfg.static_exploration.global) cfg.gamma_static_total += g;
  if (cfg.has_adaptive_global) {
    for (int k : p.u2()) {
      if (cfg.style[k] == BlockStyle::sparse) {
        cfg.gamma_adaptive_bound +=
            cfg.beta_sparse / st.delta_bar * adaptive_block_bound(p, k);
      }
    }
  }
  cfg.gamma_local_max = st.u2 > 0 ? cfg.alpha : 0.0;
  cfg.gamma_ok = cfg.gamma_static_total + cfg.gamma_adaptive_bound <= 0.5 &&
                 cfg.gamma_local_max <= 0.5;
  return cfg;
}

RealizationConfig well_clustered_schedule(const LegalPartition& p, int64_t T) {
  return build_schedule(p, RealizationMode::well_clustered, T);
}

RealizationConfig adaptive_schedule(const LegalPartition& p, int64_t T) {
  return build_schedule(p, RealizationMode::adaptive, T);
}

RealizationConfig hybrid_schedule(const LegalPartition& p, int64_t T,
                                  const std::vector<BlockStyle>& styles) {
  return build_schedule(p, RealizationMode::hybrid, T, styles);
}

BaselineRealization baseline_schedule(const FeedbackGraph& g, int64_t T) {
  if (classify(g).graph == Observability::non_observable) {
    throw ConfigError("baseline realization requires an observable graph");
  }
  BaselineRealization out{build_trivial(g), {}};
  out.config = build_schedule(out.partition, RealizationMode::baseline, T);
  return out;
}

int64_t exploration_safe_horizon(const LegalPartition& p, RealizationMode mode,
                                 const std::vector<BlockStyle>& styles) {
  auto ok = [&](int64_t T) { return build_schedule(p, mode, T, styles).gamma_ok; };
  int64_t hi = 1;
  while (!ok(hi)) {
    if (hi > (int64_t{1} << 60)) return -1;
    hi *= 2;
  }
  int64_t lo = hi / 2;  // ok(hi), !ok(lo) when lo >= 1
  if (hi == 1) return 1;
  while (lo + 1 < hi) {
    const int64_t mid = lo + (hi - lo) / 2;
    if (ok(mid)) hi = mid; else lo = mid;
  }
  return hi;
}

namespace {

double well_clustered_bound_value(const PartitionStats& st, double tf) {
  const double t12 = std::sqrt(tf);
  const double t23 = std::pow(tf, 2.0 / 3.0);
  if (st.u2 == 0 && st.u1sbar == 0) {
    return 2.0 * std::sqrt(2.0 * st.u1s) * t12;
  }
  if (st.u2 == 0) {
    return 4.0 * std::sqrt(6.0 * st.u1s) * t12 +
           2.0 * std::sqrt(10.0 * std::log(st.u1sbar + 1.0)) * t12 + t12;
  }
  const double core = std::pow(st.u2 * st.sum_delta_sq, 1.0 / 6.0);
  const double dense = std::cbrt(st.dense_delta_log);
  if (st.u1sbar == 0) {
    return 3.0 * std::pow(2.0, 2.0 / 3.0) * core * t23 +
           3.0 / std::cbrt(2.0) * dense * t23 + 4.0 * std::sqrt(static_cast<double>(st.u1s)) * t12;
  }
  return 6.0 * std::cbrt(2.0) * core * t23 + 3.0 / std::cbrt(2.0) * dense * t23 +
         4.0 * std::sqrt(6.0 * st.u1s) * t12 +
         2.0 * std::sqrt(10.0 * std::log(st.u1sbar + 1.0)) * t12 +
         4.0 * std::cbrt(tf) * std::pow(static_cast<double>(st.u2), 5.0 / 6.0) /
             (std::cbrt(2.0) * std::pow(st.sum_delta_sq, 1.0 / 6.0)) +
         std::sqrt(6.0) / 3.0 * t12;
}

double adaptive_bound_value(const PartitionStats& st, double tf) {
  const double t12 = std::sqrt(tf);
  const double t23 = std::pow(tf, 2.0 / 3.0);
  const double core = std::pow(st.u2 * st.sum_delta_sq, 1.0 / 6.0);
  const double sparse = 3.0 * std::cbrt(2.0 * st.sparse_sqrt_n) *
                        std::pow(st.sparse_n_max, 1.0 / 6.0) * t23;
  if (st.u1sbar == 0) {
    return sparse + 3.0 * std::pow(2.0, 2.0 / 3.0) * core * t23 +
           4.0 * std::sqrt(static_cast<double>(st.u1s)) * t12;
  }
  return 6.0 * std::cbrt(2.0) * core * t23 + sparse + 4.0 * std::sqrt(6.0 * st.u1s) * t12 +
         2.0 * std::sqrt(10.0 * std::log(st.u1sbar + 1.0)) * t12 +
         4.0 * std::cbrt(tf) * std::pow(static_cast<double>(st.u2), 5.0 / 6.0) /
             (std::cbrt(2.0) * std::pow(st.sum_delta_sq, 1.0 / 6.0)) +
         std::sqrt(6.0) / 3.0 * t12;
}

}  // namespace

std::vector<BoundValue> regret_bounds(const LegalPartition& p, RealizationMode mode,
                                       int64_t T) {
  const double tf = static_cast<double>(T);
  std::vector<BoundValue> out;
  const int m = p.num_blocks();
  std::vector<BlockStyle> dense(m, BlockStyle::dense), sparse(m, BlockStyle::sparse);
  switch (mode) {
    case RealizationMode::well_clustered:
    case RealizationMode::baseline:
      out.push_back({"well-clustered-bound", well_clustered_bound_value(collect_stats(p, dense), tf)});
      break;
    case RealizationMode::adaptive:
      out.push_back({"adaptive-bound", adaptive_bound_value(collect_stats(p, sparse), tf)});
      break;
    case RealizationMode::hybrid:
      out.push_back({"well-clustered-bound", well_clustered_bound_value(collect_stats(p, dense), tf)});
      out.push_back({"adaptive-bound", adaptive_bound_value(collect_stats(p, sparse), tf)});
      break;
  }
  return out;
}

double corrupted_bound(int corrupted_count, int64_t T) {
  return 9.0 * std::cbrt(4.0 * corrupted_count) * std::pow(static_cast<double>(T), 2.0 / 3.0);
}

double clique_union_order(const LegalPartition& p, int64_t T) {
  double sum_log = 0.0;
  for (int k : p.u2()) sum_log += std::log(static_cast<double>(p.block_size(k)));
  return std::cbrt(sum_log) * std::pow(static_cast<double>(T), 2.0 / 3.0);
}

std::unique_ptr<ExplorationProvider> RealizationConfig::make_provider(
    const LegalPartition& p) const {
  struct StaticProvider : ExplorationProvider {
    Exploration fixed;
    explicit StaticProvider(Exploration e) : fixed(std::move(e)) {}
    const Exploration& round_exploration(const TwoLevelState&) override { return fixed; }
  };
  if (!has_adaptive_global) {
    return std::make_unique<StaticProvider>(static_exploration);
  }

  struct AdaptiveProvider : ExplorationProvider {
    Exploration buf;
    struct SparseArm {
      int arm;
      int block;
      double coeff;                 // x*_j * beta / delta_bar
      std::vector<int> out_local;   // in-block out-neighbors, block-local indices
    };
    std::vector<SparseArm> arms;
    const Exploration& round_exploration(const TwoLevelState& s) override {
      for (auto& a : arms) {
        double acc = 0.0;
        for (int i : a.out_local) acc += std::sqrt(s.x[a.block][i]);
        buf.global[a.arm] = a.coeff * acc;
      }
      return buf;
    }
  };
  auto prov = std::make_unique<AdaptiveProvider>();
  prov->buf = static_exploration;
  const double delta_bar = p.delta_bar_star();
  for (int k : p.u2()) {
    if (style[k] != BlockStyle::sparse) continue;
    const auto& lp = p.block_lp(k);
    for (int j = 0; j < p.block_size(k); ++j) {
      AdaptiveProvider::SparseArm a;
      a.arm = p.arm(k, j);
      a.block = k;
      a.coeff = lp.weights[j] / delta_bar * beta_sparse;
      for (int w : p.graph().out_neighbors(a.arm)) {
        if (p.block_of(w) == k) a.out_local.push_back(p.index_in_block(w));
      }
      prov->arms.push_back(std::move(a));
    }
  }
  return prov;
}

}  // namespace graphbandit
