#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "graphbandit/errors.hpp"
#include "graphbandit/experiment.hpp"
#include "json.hpp"

namespace gb = graphbandit;

namespace {

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw gb::ConfigError("cannot open config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw gb::ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return j;
}

void print_graph_info(const std::string& path) {
  const gb::FeedbackGraph g = gb::FeedbackGraph::load_json(path);
  const auto obs = gb::classify(g);
  std::cout << "vertices: " << g.num_vertices() << "\n";
  std::cout << "edges: " << g.num_edges() << "\n";
  if (g.duplicates_dropped() > 0) {
    std::cout << "duplicate edges dropped: " << g.duplicates_dropped() << "\n";
  }
  std::cout << "graph: " << gb::to_string(obs.graph) << "\n";
  for (int v = 0; v < g.num_vertices(); ++v) {
    std::cout << "  vertex " << v << ": " << gb::to_string(obs.vertex[v])
              << " (in " << g.in_degree(v) << ", out " << g.out_degree(v) << ")\n";
  }
}

void print_partition(const gb::LegalPartition& p) {
  auto ids = [](std::span<const int> v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return s + "]";
  };
  std::cout << "blocks: " << p.num_blocks() << "\n";
  std::cout << "U1^S: " << ids(p.u1s()) << "\n";
  std::cout << "U1^Sbar: " << ids(p.u1sbar()) << "\n";
  std::cout << "U2: " << ids(p.u2()) << "\n";
  for (int k : p.u2()) {
    std::printf("  block %d (size %d): delta* = %.9g\n", k, p.block_size(k),
                p.block_lp(k).delta_star);
  }
  std::printf("delta-bar* = %.9g\n", p.delta_bar_star());
  std::cout << "incidence edges:";
  for (const auto& [u, v] : p.incidence().edges()) std::cout << " " << u << "->" << v;
  std::cout << "\n";
}

int run_configs(const std::string& config_path, std::string csv_path, std::string summary_path,
                bool multi) {
  const nlohmann::json j = load_json_file(config_path);
  if (!multi && j.contains("families")) {
    throw gb::ConfigError("config holds multiple families; use the sweep command");
  }
  std::vector<gb::ExperimentConfig> configs = gb::parse_experiment_list(j);
  if (csv_path.empty()) csv_path = j.value("output", nlohmann::json::object()).value("csv", "results.csv");
  if (summary_path.empty()) {
    summary_path = j.value("output", nlohmann::json::object()).value("summary", "summary.json");
  }
  std::vector<gb::FamilyResult> results;
  for (const auto& cfg : configs) results.push_back(gb::run_family(cfg));
  gb::write_csv(csv_path, results);
  gb::write_summary(summary_path, results);
  bool any_failed = false;
  for (const auto& fam : results) {
    any_failed = any_failed || fam.any_failed;
    std::cout << fam.family << ":";
    for (const auto& hs : fam.horizons) {
      std::printf(" T=%lld regret=%.6g±%.3g", static_cast<long long>(hs.horizon),
                  hs.mean_regret, hs.stderr_regret);
      if (!hs.bounds.empty()) std::printf(" bound=%.4g", hs.bounds.front().value);
    }
    if (fam.fit.defined) {
      std::printf("  slope=%.4f", fam.fit.slope);
    }
    std::cout << "\n";
  }
  std::cout << "wrote " << csv_path << " and " << summary_path << "\n";
  return any_failed ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-level mirror descent simulator for bandits with graph feedback"};
  app.require_subcommand(1);

  std::string graph_path, blocks_path, out_path, graph_out, method, config_path;
  std::string csv_path, summary_path;
  int hypercube_n = 0;

  auto* info = app.add_subcommand("graph-info", "Classify a graph file");
  info->add_option("graph", graph_path, "graph JSON file")->required();

  auto* part = app.add_subcommand("partition", "Partition construction and validation");
  part->require_subcommand(1);
  auto* build = part->add_subcommand("build", "Build a partition");
  build->add_option("--method", method,
                    "singletons | components | c-corrupted | hypercube | trivial")
      ->required();
  build->add_option("--graph", graph_path, "graph JSON file (non-hypercube methods)");
  build->add_option("--n", hypercube_n, "hypercube dimension");
  build->add_option("--out", out_path, "blocks JSON output")->required();
  build->add_option("--graph-out", graph_out, "also write the generated graph (hypercube)");
  auto* validate = part->add_subcommand("validate", "Validate a partition");
  validate->add_option("--graph", graph_path, "graph JSON file")->required();
  validate->add_option("--blocks", blocks_path, "blocks JSON file")->required();

  auto* run = app.add_subcommand("run", "Run one experiment family");
  run->add_option("-c,--config", config_path, "experiment config JSON")->required();
  run->add_option("--csv", csv_path, "override CSV output path");
  run->add_option("--summary", summary_path, "override summary output path");

  auto* sweep = app.add_subcommand("sweep", "Run several experiment families");
  sweep->add_option("-c,--config", config_path, "config JSON with a families array")->required();
  sweep->add_option("--csv", csv_path, "override CSV output path");
  sweep->add_option("--summary", summary_path, "override summary output path");

  auto* fit = app.add_subcommand("fit", "Fit scaling exponents from an emitted CSV");
  fit->add_option("csv", csv_path, "results CSV")->required();

  auto* bound = app.add_subcommand("bound", "Print analytical regret bounds for a config");
  bound->add_option("-c,--config", config_path, "experiment config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems are config errors
  }

  try {
    if (info->parsed()) {
      print_graph_info(graph_path);
      return 0;
    }
    if (part->parsed()) {
      if (build->parsed()) {
        if (method == "hypercube") {
          if (hypercube_n < 1) throw gb::ConfigError("hypercube build needs --n >= 1");
          auto hp = gb::build_hypercube_partition(hypercube_n);
          gb::LegalPartition::save_blocks_json(out_path, hp.partition.blocks());
          if (!graph_out.empty()) hp.graph.save_json(graph_out);
          print_partition(hp.partition);
        } else {
          if (graph_path.empty()) throw gb::ConfigError("partition build needs --graph");
          const auto g = gb::FeedbackGraph::load_json(graph_path);
          gb::LegalPartition p = [&] {
            if (method == "singletons") return gb::build_singletons(g);
            if (method == "components") return gb::build_components(g);
            if (method == "c-corrupted") return gb::build_c_corrupted(g);
            if (method == "trivial") return gb::build_trivial(g);
            throw gb::ConfigError("unknown partition method: " + method);
          }();
          gb::LegalPartition::save_blocks_json(out_path, p.blocks());
          print_partition(p);
        }
        return 0;
      }
      const auto g = gb::FeedbackGraph::load_json(graph_path);
      const auto blocks = gb::LegalPartition::load_blocks_json(blocks_path);
      print_partition(gb::LegalPartition::validate(g, blocks));
      return 0;
    }
    if (run->parsed()) return run_configs(config_path, csv_path, summary_path, false);
    if (sweep->parsed()) return run_configs(config_path, csv_path, summary_path, true);
    if (fit->parsed()) {
      for (const auto& [family, fr] : gb::fit_from_csv(csv_path)) {
        if (fr.defined) {
          std::printf("%s: slope=%.6f intercept=%.6f residual=%.6f\n", family.c_str(), fr.slope,
                      fr.intercept, fr.residual);
        } else {
          std::printf("%s: fit undefined (%s)\n", family.c_str(), fr.reason.c_str());
        }
      }
      return 0;
    }
    if (bound->parsed()) {
      const nlohmann::json j = load_json_file(config_path);
      for (const auto& cfg : gb::parse_experiment_list(j)) {
        const auto graph = gb::build_graph(cfg.graph);
        const auto partition = gb::build_partition(graph, cfg.partition, cfg.graph);
        std::cout << cfg.family << ":\n";
        for (int64_t T : cfg.horizons) {
          std::cout << "  T=" << T << ":";
          for (const auto& b : gb::bound_report(cfg, partition, T)) {
            std::printf(" %s=%.6g", b.label.c_str(), b.value);
          }
          std::cout << "\n";
        }
      }
      return 0;
    }
  } catch (const gb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
