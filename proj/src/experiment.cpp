#include "graphbandit/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "graphbandit/errors.hpp"

namespace graphbandit {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int count_corrupted(const FeedbackGraph& g) {
  const auto obs = classify(g);
  int c = 0;
  for (auto label : obs.vertex) {
    if (label != Observability::strongly_observable) ++c;
  }
  return c;
}

}  // namespace

FeedbackGraph build_graph(const GraphSpec& spec) {
  if (!spec.file.empty()) return FeedbackGraph::load_json(spec.file);
  const std::string& gen = spec.generator;
  if (gen == "mab") return make_mab(spec.n);
  if (gen == "clique_union") return make_clique_union(spec.sizes);
  if (gen == "bipartite_union") return make_bipartite_union(spec.sizes);
  if (gen == "directed_cycle") return make_directed_cycle(spec.n);
  if (gen == "undirected_cycle") return make_undirected_cycle(spec.n);
  if (gen == "hypercube") return make_hypercube(spec.n);
  if (gen == "loopy_star") return make_loopy_star(spec.leaves, spec.corrupted);
  if (gen == "corrupted_mab") return make_corrupted_mab(spec.clean, spec.corrupted);
  throw ConfigError("unknown graph source (need file or generator): '" + gen + "'");
}

LegalPartition build_partition(const FeedbackGraph& g, const PartitionSpec& spec,
                               const GraphSpec& graph_spec) {
  const std::string& m = spec.method;
  if (m == "file") {
    if (spec.file.empty()) throw ConfigError("partition method 'file' needs a blocks file");
    return LegalPartition::validate(g, LegalPartition::load_blocks_json(spec.file));
  }
  if (m == "singletons") return build_singletons(g);
  if (m == "components") return build_components(g);
  if (m == "c-corrupted") return build_c_corrupted(g);
  if (m == "trivial") return build_trivial(g);
  if (m == "hypercube") {
    if (graph_spec.generator != "hypercube") {
      throw ConfigError("hypercube partition requires the hypercube generator");
    }
    return build_hypercube_partition(graph_spec.n).partition;
  }
  throw ConfigError("unknown partition method: " + m);
}

nlohmann::ordered_json preset_json(const std::string& name) {
  using J = nlohmann::ordered_json;
  J j;
  j["family"] = name;
  j["adversary"] = {{"kind", "stochastic_gap"}, {"gap", 0.2}, {"best_arm", -1}};
  j["horizons"] = {2048, 4096, 8192, 16384, 32768, 65536, 131072};
  j["seeds"] = {{"count", 20}, {"base", 1}};
  if (name == "c-corrupted") {
    j["graph"] = {{"generator", "corrupted_mab"}, {"clean", 6}, {"corrupted", 2}};
    j["partition"] = {{"method", "c-corrupted"}};
    j["realization"] = {{"mode", "adaptive"}};
  } else if (name == "clique-union") {
    j["graph"] = {{"generator", "clique_union"}, {"sizes", {4, 4, 4, 4}}};
    j["partition"] = {{"method", "components"}};
    j["realization"] = {{"mode", "well_clustered"}};
  } else if (name == "bipartite-union") {
    j["graph"] = {{"generator", "bipartite_union"}, {"sizes", {4, 4, 4, 4}}};
    j["partition"] = {{"method", "components"}};
    j["realization"] = {{"mode", "well_clustered"}};
  } else if (name == "bounded-degree") {
    j["graph"] = {{"generator", "directed_cycle"}, {"n", 10}};
    j["partition"] = {{"method", "trivial"}};
    j["realization"] = {{"mode", "adaptive"}};
  } else if (name == "hypercube") {
    j["graph"] = {{"generator", "hypercube"}, {"n", 4}};
    j["partition"] = {{"method", "hypercube"}};
    j["realization"] = {{"mode", "well_clustered"}};
  } else {
    throw ConfigError("unknown preset: " + name);
  }
  return j;
}

namespace {

AdversarySpec parse_adversary(const nlohmann::json& j, std::string& csv_out) {
  AdversarySpec spec;
  const std::string kind = j.value("kind", "stochastic_gap");
  if (kind == "constant") {
    spec = AdversarySpec::constant(j.value("value", 0.5));
  } else if (kind == "stochastic_gap") {
    spec = AdversarySpec::stochastic(j.value("gap", 0.1), j.value("best_arm", -1));
  } else if (kind == "fixed_sequence") {
    spec.kind = AdversaryKind::fixed_sequence;
    csv_out = j.value("file", "");
    if (csv_out.empty()) throw ConfigError("fixed_sequence adversary needs a file");
  } else {
    throw ConfigError("unknown adversary kind: " + kind);
  }
  return spec;
}

}  // namespace

ExperimentConfig parse_experiment(const nlohmann::json& raw) {
  nlohmann::json j = raw;
  if (j.contains("preset")) {
    nlohmann::json base = preset_json(j.at("preset").get<std::string>());
    j.erase("preset");
    base.update(j, /*merge_objects=*/true);
    j = std::move(base);
  }
  ExperimentConfig cfg;
  cfg.family = j.value("family", std::string("experiment"));
  if (cfg.family.find(',') != std::string::npos) {
    throw ConfigError("family names must not contain commas");
  }
  if (!j.contains("graph")) throw ConfigError("config needs a graph section");
  {
    const auto& g = j.at("graph");
    cfg.graph.file = g.value("file", "");
    cfg.graph.generator = g.value("generator", "");
    cfg.graph.sizes = g.value("sizes", std::vector<int>{});
    cfg.graph.n = g.value("n", 0);
    cfg.graph.leaves = g.value("leaves", 0);
    cfg.graph.clean = g.value("clean", 0);
    cfg.graph.corrupted = g.value("corrupted", 0);
  }
  if (j.contains("partition")) {
    cfg.partition.method = j.at("partition").value("method", "components");
    cfg.partition.file = j.at("partition").value("file", "");
  }
  if (j.contains("realization")) {
    const auto& r = j.at("realization");
    cfg.realization.mode = parse_mode(r.value("mode", "well_clustered"));
    cfg.realization.styles = r.value("styles", std::vector<std::string>{});
    if (r.contains("overrides")) {
      const auto& ov = r.at("overrides");
      auto pick = [&](const char* name) -> std::optional<double> {
        if (!ov.contains(name)) return std::nullopt;
        return ov.at(name).get<double>();
      };
      cfg.realization.overrides.eta = pick("eta");
      cfg.realization.overrides.eta_s = pick("eta_s");
      cfg.realization.overrides.eta_sbar = pick("eta_sbar");
      cfg.realization.overrides.alpha = pick("alpha");
      cfg.realization.overrides.beta_dense = pick("beta_dense");
      cfg.realization.overrides.beta_sparse = pick("beta_sparse");
      if (ov.contains("eta_block")) {
        cfg.realization.overrides.eta_block = ov.at("eta_block").get<std::vector<double>>();
      }
      for (const auto& [key, value] : ov.items()) {
        static const std::set<std::string> known = {
            "eta", "eta_s", "eta_sbar", "alpha", "beta_dense", "beta_sparse", "eta_block"};
        if (!known.count(key)) throw ConfigError("unknown realization override: " + key);
      }
    }
  }
  if (j.contains("adversary")) {
    cfg.adversary = parse_adversary(j.at("adversary"), cfg.adversary_csv);
  }
  if (!j.contains("horizons")) throw ConfigError("config needs horizons");
  cfg.horizons = j.at("horizons").get<std::vector<int64_t>>();
  for (size_t i = 0; i < cfg.horizons.size(); ++i) {
    if (cfg.horizons[i] < 1) throw ConfigError("horizons must be positive");
    if (i > 0 && cfg.horizons[i] <= cfg.horizons[i - 1]) {
      throw ConfigError("horizons must be strictly increasing");
    }
  }
  if (j.contains("seeds")) {
    const auto& s = j.at("seeds");
    if (s.is_array()) {
      cfg.seeds = s.get<std::vector<uint64_t>>();
    } else {
      const auto count = s.value("count", 0);
      const auto base = s.value("base", 1);
      for (int i = 0; i < count; ++i) cfg.seeds.push_back(static_cast<uint64_t>(base) + i);
    }
  }
  if (cfg.seeds.empty()) throw ConfigError("config needs a non-empty seeds list");
  cfg.checkpoints = j.value("checkpoints", 32);
  if (cfg.checkpoints < 1) throw ConfigError("checkpoints must be >= 1");
  cfg.threads = j.value("threads", 0);
  return cfg;
}

std::vector<ExperimentConfig> parse_experiment_list(const nlohmann::json& j) {
  std::vector<ExperimentConfig> out;
  if (j.contains("families")) {
    for (const auto& f : j.at("families")) out.push_back(parse_experiment(f));
  } else {
    out.push_back(parse_experiment(j));
  }
  std::set<std::string> names;
  for (const auto& c : out) {
    if (!names.insert(c.family).second) {
      throw ConfigError("duplicate family name: " + c.family);
    }
  }
  return out;
}

FitResult fit_exponent(std::span<const std::pair<double, double>> points) {
  FitResult fit;
  if (points.size() < 3) {
    fit.reason = "need at least 3 horizons";
    return fit;
  }
  for (const auto& [t, r] : points) {
    if (!(r > 0.0)) {
      fit.reason = "nonpositive mean regret";
      return fit;
    }
  }
  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [t, r] : points) {
    const double x = std::log(t), y = std::log(r);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double sse = 0;
  for (const auto& [t, r] : points) {
    const double e = std::log(r) - (fit.intercept + fit.slope * std::log(t));
    sse += e * e;
  }
  fit.residual = std::sqrt(sse / n);
  fit.defined = true;
  return fit;
}

std::vector<BoundValue> bound_report(const ExperimentConfig& config, const LegalPartition& p,
                                     int64_t horizon) {
  std::vector<BoundValue> out;
  if (config.partition.method == "c-corrupted") {
    out.push_back({"corrupted-bound", corrupted_bound(count_corrupted(p.graph()), horizon)});
  }
  auto th = regret_bounds(p, config.realization.mode, horizon);
  out.insert(out.end(), th.begin(), th.end());
  if (config.graph.generator == "clique_union") {
    out.push_back({"clique-union-order", clique_union_order(p, horizon)});
  }
  return out;
}

namespace {

std::vector<BlockStyle> resolve_styles(const LegalPartition& p,
                                       const std::vector<std::string>& names) {
  const int m = p.num_blocks();
  std::vector<BlockStyle> styles(m, BlockStyle::dense);
  auto parse = [](const std::string& s) {
    if (s == "dense") return BlockStyle::dense;
    if (s == "sparse") return BlockStyle::sparse;
    throw ConfigError("block style must be dense or sparse, got '" + s + "'");
  };
  if (static_cast<int>(names.size()) == m) {
    for (int k = 0; k < m; ++k) styles[k] = parse(names[k]);
  } else if (names.size() == p.u2().size()) {
    int i = 0;
    for (int k : p.u2()) styles[k] = parse(names[i++]);
  } else {
    throw ConfigError("hybrid styles must list one entry per block or per multi-vertex block");
  }
  return styles;
}

nlohmann::ordered_json constants_json(const RealizationConfig& rc) {
  nlohmann::ordered_json c;
  c["eta"] = rc.eta;
  c["eta_s"] = rc.eta_s;
  c["eta_sbar"] = rc.eta_sbar;
  c["alpha"] = rc.alpha;
  c["beta_dense"] = rc.beta_dense;
  c["beta_sparse"] = rc.beta_sparse;
  c["eta_block"] = rc.eta_block;
  c["gamma_static_total"] = rc.gamma_static_total;
  c["gamma_adaptive_bound"] = rc.gamma_adaptive_bound;
  c["gamma_local_max"] = rc.gamma_local_max;
  return c;
}

}  // namespace

FamilyResult run_family(const ExperimentConfig& config) {
  FamilyResult result;
  result.family = config.family;
  result.config = config;

  const FeedbackGraph graph = build_graph(config.graph);
  const LegalPartition partition = build_partition(graph, config.partition, config.graph);

  ExperimentConfig cfg = config;
  if (cfg.adversary.kind == AdversaryKind::fixed_sequence && cfg.adversary.table.empty()) {
    cfg.adversary = AdversarySpec::from_csv(cfg.adversary_csv, graph.num_vertices());
  }

  std::vector<BlockStyle> styles;
  if (cfg.realization.mode == RealizationMode::hybrid) {
    styles = resolve_styles(partition, cfg.realization.styles);
  }

  // One schedule and checkpoint grid per horizon, shared by its runs.
  struct PerHorizon {
    RealizationConfig schedule;
    std::vector<int64_t> checkpoints;
  };
  std::vector<PerHorizon> per_h;
  const LegalPartition* run_partition = &partition;
  LegalPartition baseline_partition;
  if (cfg.realization.mode == RealizationMode::baseline) {
    baseline_partition = build_trivial(graph);
    run_partition = &baseline_partition;
  }
  for (int64_t T : cfg.horizons) {
    PerHorizon ph;
    ph.schedule = build_schedule(*run_partition, cfg.realization.mode, T, styles,
                                 cfg.realization.overrides);
    ph.checkpoints = geometric_checkpoints(T, cfg.checkpoints);
    per_h.push_back(std::move(ph));
  }
  const int64_t safe_horizon =
      exploration_safe_horizon(*run_partition, cfg.realization.mode, styles);

  struct Job {
    size_t h_index;
    uint64_t seed;
  };
  std::vector<Job> jobs;
  for (size_t h = 0; h < cfg.horizons.size(); ++h) {
    for (uint64_t s : cfg.seeds) jobs.push_back({h, s});
  }
  std::vector<RunRecord> records(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      records[i] = play_game(*run_partition, per_h[job.h_index].schedule, cfg.adversary,
                             cfg.horizons[job.h_index], job.seed,
                             per_h[job.h_index].checkpoints);
    }
  };
  int nthreads = cfg.threads > 0 ? cfg.threads
                                 : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::max(1, std::min<int>(nthreads, static_cast<int>(jobs.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Deterministic aggregation: jobs were laid out sorted by (horizon, seed).
  std::vector<std::pair<double, double>> fit_points;
  for (size_t h = 0; h < cfg.horizons.size(); ++h) {
    HorizonSummary hs;
    hs.horizon = cfg.horizons[h];
    double sum = 0.0, sum_sq = 0.0;
    int count = 0;
    for (size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].h_index != h) continue;
      const RunRecord& rec = records[i];
      result.runs.push_back(rec);
      result.any_failed = result.any_failed || rec.failed;
      if (!rec.failed && !rec.checkpoints.empty()) {
        const double r = rec.checkpoints.back().regret;
        sum += r;
        sum_sq += r * r;
        ++count;
      }
      hs.guard_violations += rec.diag.guard_violations;
      hs.gamma_over_half += rec.diag.gamma_over_half;
      hs.w_bound_violations += rec.diag.w_bound_violations;
      hs.gamma_bar_max = std::max(hs.gamma_bar_max, rec.diag.gamma_bar_max);
      hs.solver_calls += rec.diag.solver.calls;
      hs.solver_iterations += rec.diag.solver.iterations;
    }
    if (count > 0) {
      hs.mean_regret = sum / count;
      if (count > 1) {
        const double var = std::max(0.0, (sum_sq - sum * sum / count) / (count - 1));
        hs.stderr_regret = std::sqrt(var / count);
      }
      fit_points.emplace_back(static_cast<double>(hs.horizon), hs.mean_regret);
    }
    hs.gamma_ok = per_h[h].schedule.gamma_ok;
    hs.safe_horizon = safe_horizon;
    hs.bounds = bound_report(cfg, *run_partition, hs.horizon);
    hs.constants = constants_json(per_h[h].schedule);
    result.horizons.push_back(std::move(hs));
  }
  result.fit = fit_exponent(fit_points);
  return result;
}

void write_csv(const std::string& path, std::span<const FamilyResult> results) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write CSV: " + path);
  out << "family,T,seed,checkpoint_t,regret\n";
  for (const auto& fam : results) {
    for (const auto& rec : fam.runs) {  // already sorted by (horizon, seed)
      for (const auto& cp : rec.checkpoints) {
        out << fam.family << ',' << rec.horizon << ',' << rec.seed << ',' << cp.t << ','
            << fmt_double(cp.regret) << '\n';
      }
    }
  }
}

nlohmann::ordered_json summary_json(const FamilyResult& result) {
  nlohmann::ordered_json j;
  j["family"] = result.family;
  j["realization"] = to_string(result.config.realization.mode);
  j["partition_method"] = result.config.partition.method;
  j["seeds"] = result.config.seeds.size();
  auto horizons = nlohmann::ordered_json::array();
  for (const auto& hs : result.horizons) {
    nlohmann::ordered_json h;
    h["T"] = hs.horizon;
    h["mean_regret"] = hs.mean_regret;
    h["stderr_regret"] = hs.stderr_regret;
    h["guard_violations"] = hs.guard_violations;
    h["gamma_over_half_rounds"] = hs.gamma_over_half;
    h["w_bound_violations"] = hs.w_bound_violations;
    h["gamma_bar_max"] = hs.gamma_bar_max;
    h["solver_calls"] = hs.solver_calls;
    h["solver_iterations"] = hs.solver_iterations;
    h["gamma_ok"] = hs.gamma_ok;
    h["safe_horizon"] = hs.safe_horizon;
    auto bounds = nlohmann::ordered_json::object();
    for (const auto& b : hs.bounds) bounds[b.label] = b.value;
    h["bounds"] = bounds;
    h["constants"] = hs.constants;
    horizons.push_back(std::move(h));
  }
  j["per_horizon"] = std::move(horizons);
  nlohmann::ordered_json fit;
  fit["defined"] = result.fit.defined;
  if (result.fit.defined) {
    fit["slope"] = result.fit.slope;
    fit["intercept"] = result.fit.intercept;
    fit["residual"] = result.fit.residual;
  } else {
    fit["reason"] = result.fit.reason;
  }
  j["fit"] = std::move(fit);
  auto failures = nlohmann::ordered_json::array();
  for (const auto& rec : result.runs) {
    if (rec.failed) {
      failures.push_back({{"T", rec.horizon}, {"seed", rec.seed},
                          {"round", rec.failed_round}, {"error", rec.error}});
    }
  }
  j["failures"] = std::move(failures);
  return j;
}

void write_summary(const std::string& path, std::span<const FamilyResult> results) {
  nlohmann::ordered_json j;
  if (results.size() == 1) {
    j = summary_json(results.front());
  } else {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& fam : results) arr.push_back(summary_json(fam));
    j["families"] = std::move(arr);
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write summary: " + path);
  out << j.dump(2) << "\n";
}

std::vector<std::pair<std::string, FitResult>> fit_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CSV: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("family,T,seed,checkpoint_t,regret", 0) != 0) {
    throw ConfigError("unexpected CSV header");
  }
  // family -> (T, seed) -> (max checkpoint_t seen, regret there)
  std::map<std::string, std::map<std::pair<int64_t, uint64_t>, std::pair<int64_t, double>>> data;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string family, t_s, seed_s, cp_s, regret_s;
    if (!std::getline(row, family, ',') || !std::getline(row, t_s, ',') ||
        !std::getline(row, seed_s, ',') || !std::getline(row, cp_s, ',') ||
        !std::getline(row, regret_s, ',')) {
      throw ConfigError("malformed CSV row: " + line);
    }
    const int64_t T = std::stoll(t_s);
    const uint64_t seed = std::stoull(seed_s);
    const int64_t cp = std::stoll(cp_s);
    const double regret = std::stod(regret_s);
    auto& slot = data[family][{T, seed}];
    if (cp >= slot.first) slot = {cp, regret};
  }
  std::vector<std::pair<std::string, FitResult>> out;
  for (const auto& [family, runs] : data) {
    std::map<int64_t, std::pair<double, int>> by_t;
    for (const auto& [key, val] : runs) {
      by_t[key.first].first += val.second;
      by_t[key.first].second += 1;
    }
    std::vector<std::pair<double, double>> points;
    for (const auto& [T, acc] : by_t) {
      points.emplace_back(static_cast<double>(T), acc.first / acc.second);
    }
    out.emplace_back(family, fit_exponent(points));
  }
  return out;
}

}  // namespace graphbandit
