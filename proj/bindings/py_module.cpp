#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "graphbandit/errors.hpp"
#include "graphbandit/experiment.hpp"

namespace py = pybind11;
namespace gb = graphbandit;

namespace {

gb::PotentialKind parse_kind(const std::string& name) {
  if (name == "negative_entropy") return gb::PotentialKind::negative_entropy;
  if (name == "tsallis_half") return gb::PotentialKind::tsallis_half;
  throw gb::ConfigError("unknown potential kind: " + name);
}

py::dict classify_dict(const gb::FeedbackGraph& g) {
  const auto obs = gb::classify(g);
  py::list vertex;
  for (auto v : obs.vertex) vertex.append(std::string(gb::to_string(v)));
  py::dict d;
  d["graph"] = std::string(gb::to_string(obs.graph));
  d["vertex"] = vertex;
  return d;
}

py::dict partition_dict(const gb::LegalPartition& p) {
  py::dict d;
  d["blocks"] = p.blocks();
  d["u1s"] = std::vector<int>(p.u1s().begin(), p.u1s().end());
  d["u1sbar"] = std::vector<int>(p.u1sbar().begin(), p.u1sbar().end());
  d["u2"] = std::vector<int>(p.u2().begin(), p.u2().end());
  d["delta_bar_star"] = p.delta_bar_star();
  py::dict deltas;
  for (int k : p.u2()) deltas[py::int_(k)] = p.block_lp(k).delta_star;
  d["delta_star"] = deltas;
  d["incidence_edges"] = p.incidence().edges();
  return d;
}

gb::LegalPartition build_named_partition(const gb::FeedbackGraph& g, const std::string& method) {
  if (method == "singletons") return gb::build_singletons(g);
  if (method == "components") return gb::build_components(g);
  if (method == "c-corrupted") return gb::build_c_corrupted(g);
  if (method == "trivial") return gb::build_trivial(g);
  throw gb::ConfigError("unknown partition method: " + method);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-level online stochastic mirror descent for bandits with graph feedback";

  py::register_exception<gb::ConfigError>(m, "GraphBanditConfigError", PyExc_ValueError);
  py::register_exception<gb::RunFailure>(m, "GraphBanditRunError", PyExc_RuntimeError);

  py::class_<gb::FeedbackGraph>(m, "FeedbackGraph")
      .def(py::init<int, const std::vector<std::pair<int, int>>&>(), py::arg("num_vertices"),
           py::arg("edges"))
      .def_property_readonly("num_vertices", &gb::FeedbackGraph::num_vertices)
      .def_property_readonly("num_edges", &gb::FeedbackGraph::num_edges)
      .def("edges", &gb::FeedbackGraph::edges)
      .def("in_neighbors",
           [](const gb::FeedbackGraph& g, int v) {
             auto s = g.in_neighbors(v);
             return std::vector<int>(s.begin(), s.end());
           })
      .def("out_neighbors",
           [](const gb::FeedbackGraph& g, int v) {
             auto s = g.out_neighbors(v);
             return std::vector<int>(s.begin(), s.end());
           })
      .def("to_json", &gb::FeedbackGraph::to_json)
      .def_static("load_json", &gb::FeedbackGraph::load_json)
      .def_static("parse_json", &gb::FeedbackGraph::parse_json)
      .def("save_json", &gb::FeedbackGraph::save_json);

  m.def("classify", &classify_dict, py::arg("graph"));
  m.def("greedy_packing_independent_set", &gb::greedy_packing_independent_set,
        py::arg("graph"), py::arg("t"));
  m.def("incidence_graph", &gb::incidence_graph, py::arg("graph"), py::arg("blocks"));

  m.def("mab", &gb::make_mab, py::arg("n"));
  m.def("loopless_clique", &gb::make_loopless_clique, py::arg("n"));
  m.def("clique_union",
        [](const std::vector<int>& sizes) { return gb::make_clique_union(sizes); });
  m.def("bipartite_union",
        [](const std::vector<int>& sizes) { return gb::make_bipartite_union(sizes); });
  m.def("directed_cycle", &gb::make_directed_cycle, py::arg("n"));
  m.def("undirected_cycle", &gb::make_undirected_cycle, py::arg("n"));
  m.def("hypercube", &gb::make_hypercube, py::arg("n"));
  m.def("loopy_star", &gb::make_loopy_star, py::arg("leaves"), py::arg("corrupted"));
  m.def("corrupted_mab", &gb::make_corrupted_mab, py::arg("clean"), py::arg("corrupted"));

  m.def("solve_block_lp", [](const gb::FeedbackGraph& g, const std::vector<int>& block) {
    const auto lp = gb::solve_block_lp(g, block);
    return py::make_tuple(lp.delta_star, lp.weights);
  });
  m.def(
      "validate_partition",
      [](const gb::FeedbackGraph& g, const std::vector<std::vector<int>>& blocks) {
        return partition_dict(gb::LegalPartition::validate(g, blocks));
      },
      py::arg("graph"), py::arg("blocks"));
  m.def(
      "build_partition",
      [](const gb::FeedbackGraph& g, const std::string& method) {
        return partition_dict(build_named_partition(g, method));
      },
      py::arg("graph"), py::arg("method"));
  m.def("hypercube_partition", [](int n) {
    const auto hp = gb::build_hypercube_partition(n);
    py::dict d = partition_dict(hp.partition);
    d["dominating_set"] = hp.dominating_set;
    return d;
  });

  m.def(
      "mirror_step_simplex",
      [](const std::vector<double>& x, const std::vector<double>& loss, const std::string& kind,
         double rate, double step) {
        return gb::mirror_step_simplex(x, loss, gb::PotentialSpec{parse_kind(kind), rate}, step);
      },
      py::arg("x"), py::arg("loss"), py::arg("kind"), py::arg("rate") = 1.0,
      py::arg("step") = 1.0);
  m.def(
      "unconstrained_step",
      [](const std::vector<double>& y, const std::vector<double>& shifted_loss,
         const std::string& kind, double rate) {
        return gb::unconstrained_step(
            y, shifted_loss,
            gb::SeparablePotential::uniform({parse_kind(kind), rate},
                                            static_cast<int>(y.size())));
      },
      py::arg("y"), py::arg("shifted_loss"), py::arg("kind"), py::arg("rate") = 1.0);

  m.def(
      "play_game",
      [](const gb::FeedbackGraph& g, const std::string& partition_method,
         const std::string& mode, int64_t horizon, uint64_t seed, const std::string& adversary,
         double gap, int best_arm, int checkpoints) {
        const auto p = build_named_partition(g, partition_method);
        const auto rc = gb::build_schedule(p, gb::parse_mode(mode), horizon);
        gb::AdversarySpec spec;
        if (adversary == "constant") {
          spec = gb::AdversarySpec::constant(gap);
        } else if (adversary == "stochastic_gap") {
          spec = gb::AdversarySpec::stochastic(gap, best_arm);
        } else {
          throw gb::ConfigError("play_game supports constant and stochastic_gap adversaries");
        }
        const auto cps = gb::geometric_checkpoints(horizon, checkpoints);
        const auto rec = gb::play_game(p, rc, spec, horizon, seed, cps);
        if (rec.failed) throw gb::RunFailure(rec.error);
        py::list out;
        for (const auto& cp : rec.checkpoints) {
          py::dict d;
          d["t"] = cp.t;
          d["player_loss"] = cp.player_loss;
          d["best_arm_loss"] = cp.best_arm_loss;
          d["regret"] = cp.regret;
          out.append(d);
        }
        return out;
      },
      py::arg("graph"), py::arg("partition"), py::arg("mode"), py::arg("horizon"),
      py::arg("seed"), py::arg("adversary") = "stochastic_gap", py::arg("gap") = 0.1,
      py::arg("best_arm") = -1, py::arg("checkpoints") = 32);

  m.def(
      "fit_exponent",
      [](const std::vector<std::pair<double, double>>& points) {
        const auto fit = gb::fit_exponent(points);
        py::dict d;
        d["defined"] = fit.defined;
        if (fit.defined) {
          d["slope"] = fit.slope;
          d["intercept"] = fit.intercept;
          d["residual"] = fit.residual;
        } else {
          d["reason"] = fit.reason;
        }
        return d;
      },
      py::arg("points"));

  // Full experiment configs travel as JSON text; the Python wrapper converts
  // dicts on both sides.
  m.def("run_experiment_json", [](const std::string& config) {
    const auto configs = gb::parse_experiment_list(nlohmann::json::parse(config));
    std::vector<gb::FamilyResult> results;
    for (const auto& cfg : configs) results.push_back(gb::run_family(cfg));
    if (results.size() == 1) return gb::summary_json(results.front()).dump();
    nlohmann::ordered_json out;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& fam : results) arr.push_back(gb::summary_json(fam));
    out["families"] = std::move(arr);
    return out.dump();
  });
  m.def("bound_report_json", [](const std::string& config) {
    nlohmann::ordered_json out;
    for (const auto& cfg : gb::parse_experiment_list(nlohmann::json::parse(config))) {
      const auto g = gb::build_graph(cfg.graph);
      const auto p = gb::build_partition(g, cfg.partition, cfg.graph);
      nlohmann::ordered_json fam;
      for (int64_t T : cfg.horizons) {
        nlohmann::ordered_json row;
        for (const auto& b : gb::bound_report(cfg, p, T)) row[b.label] = b.value;
        fam[std::to_string(T)] = std::move(row);
      }
      out[cfg.family] = std::move(fam);
    }
    return out.dump();
  });
}
