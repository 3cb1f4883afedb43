#include "graphbandit/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "graphbandit/errors.hpp"
#include "json.hpp"

namespace graphbandit {

const char* to_string(Observability o) {
  switch (o) {
    case Observability::non_observable: return "non_observable";
    case Observability::weakly_observable: return "weakly_observable";
    case Observability::strongly_observable: return "strongly_observable";
  }
  return "?";
}

FeedbackGraph::FeedbackGraph(int num_vertices,
                             const std::vector<std::pair<int, int>>& edge_list)
    : num_vertices_(num_vertices) {
  if (num_vertices < 1) throw ConfigError("graph must have at least one vertex");
  std::vector<std::pair<int, int>> edges = edge_list;
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= num_vertices || v < 0 || v >= num_vertices) {
      throw ConfigError("edge endpoint out of range: (" + std::to_string(u) + ", " +
                        std::to_string(v) + ")");
    }
  }
  std::sort(edges.begin(), edges.end());
  const auto last = std::unique(edges.begin(), edges.end());
  duplicates_dropped_ = static_cast<int>(edges.end() - last);
  edges.erase(last, edges.end());
  num_edges_ = static_cast<int>(edges.size());

  out_ptr_.assign(num_vertices + 1, 0);
  in_ptr_.assign(num_vertices + 1, 0);
  for (const auto& [u, v] : edges) {
    ++out_ptr_[u + 1];
    ++in_ptr_[v + 1];
  }
  for (int i = 0; i < num_vertices; ++i) {
    out_ptr_[i + 1] += out_ptr_[i];
    in_ptr_[i + 1] += in_ptr_[i];
  }
  out_adj_.resize(num_edges_);
  in_adj_.resize(num_edges_);
  std::vector<int> ofill(out_ptr_.begin(), out_ptr_.end() - 1);
  std::vector<int> ifill(in_ptr_.begin(), in_ptr_.end() - 1);
  for (const auto& [u, v] : edges) {
    out_adj_[ofill[u]++] = v;
    in_adj_[ifill[v]++] = u;
  }
  for (int v = 0; v < num_vertices; ++v) {
    std::sort(in_adj_.begin() + in_ptr_[v], in_adj_.begin() + in_ptr_[v + 1]);
  }
}

std::span<const int> FeedbackGraph::in_neighbors(int v) const {
  return {in_adj_.data() + in_ptr_[v], in_adj_.data() + in_ptr_[v + 1]};
}

std::span<const int> FeedbackGraph::out_neighbors(int v) const {
  return {out_adj_.data() + out_ptr_[v], out_adj_.data() + out_ptr_[v + 1]};
}

bool FeedbackGraph::has_edge(int u, int v) const {
  const auto nbrs = out_neighbors(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::vector<std::pair<int, int>> FeedbackGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(num_edges_);
  for (int u = 0; u < num_vertices_; ++u) {
    for (int v : out_neighbors(u)) out.emplace_back(u, v);
  }
  return out;
}

FeedbackGraph FeedbackGraph::parse_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("graph file is not valid JSON: ") + e.what());
  }
  if (!j.contains("num_vertices") || !j.contains("edges")) {
    throw ConfigError("graph file must contain num_vertices and edges");
  }
  const int n = j.at("num_vertices").get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw ConfigError("edges must be [u, v] pairs");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return FeedbackGraph(n, edges);
}

FeedbackGraph FeedbackGraph::load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open graph file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

std::string FeedbackGraph::to_json() const {
  nlohmann::ordered_json j;
  j["num_vertices"] = num_vertices_;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& [u, v] : edges()) arr.push_back({u, v});
  j["edges"] = std::move(arr);
  return j.dump(2);
}

void FeedbackGraph::save_json(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write graph file: " + path);
  out << to_json() << "\n";
}

ObservabilityClass classify(const FeedbackGraph& g) {
  const int n = g.num_vertices();
  ObservabilityClass result;
  result.vertex.resize(n);
  bool all_strong = true;
  bool any_non = false;
  for (int v = 0; v < n; ++v) {
    const auto in = g.in_neighbors(v);
    Observability label;
    if (in.empty()) {
      label = Observability::non_observable;
    } else if (g.has_self_loop(v)) {
      label = Observability::strongly_observable;
    } else {
      // No self-loop: strongly observable iff observed by every other vertex.
      const int others = static_cast<int>(in.size());
      label = (others == n - 1) ? Observability::strongly_observable
                                : Observability::weakly_observable;
    }
    result.vertex[v] = label;
    all_strong = all_strong && label == Observability::strongly_observable;
    any_non = any_non || label == Observability::non_observable;
  }
  result.graph = any_non        ? Observability::non_observable
                 : all_strong   ? Observability::strongly_observable
                                : Observability::weakly_observable;
  return result;
}

std::vector<int> greedy_packing_independent_set(const FeedbackGraph& g, int t) {
  if (t < 1) throw ConfigError("packing parameter t must be >= 1");
  const int n = g.num_vertices();
  std::vector<int> set;
  std::vector<char> in_set(n, 0);
  // edges_into[u] = |N_out(u) ∩ S| so far.
  std::vector<int> edges_into(n, 0);
  for (int v = 0; v < n; ++v) {
    if (g.has_self_loop(v)) continue;
    bool ok = true;
    for (int w : g.out_neighbors(v)) {
      if (in_set[w]) { ok = false; break; }
    }
    if (ok) {
      for (int w : g.in_neighbors(v)) {
        if (in_set[w] || edges_into[w] + 1 > t) { ok = false; break; }
      }
    }
    if (!ok) continue;
    set.push_back(v);
    in_set[v] = 1;
    for (int w : g.in_neighbors(v)) ++edges_into[w];
  }
  return set;
}

FeedbackGraph incidence_graph(const FeedbackGraph& g,
                              const std::vector<std::vector<int>>& blocks) {
  const int n = g.num_vertices();
  const int m = static_cast<int>(blocks.size());
  std::vector<int> block_of(n, -1);
  for (int k = 0; k < m; ++k) {
    for (int v : blocks[k]) {
      if (v < 0 || v >= n) throw ConfigError("block vertex out of range");
      if (block_of[v] != -1) throw ConfigError("blocks overlap at vertex " + std::to_string(v));
      block_of[v] = k;
    }
  }
  for (int v = 0; v < n; ++v) {
    if (block_of[v] == -1) throw ConfigError("vertex " + std::to_string(v) + " not in any block");
  }
  std::set<std::pair<int, int>> h_edges;
  for (const auto& [u, v] : g.edges()) {
    const int i = block_of[u], j = block_of[v];
    if (i != j) h_edges.insert({i, j});
  }
  return FeedbackGraph(m, {h_edges.begin(), h_edges.end()});
}

FeedbackGraph make_mab(int n) {
  std::vector<std::pair<int, int>> e;
  for (int v = 0; v < n; ++v) e.emplace_back(v, v);
  return FeedbackGraph(n, e);
}

FeedbackGraph make_loopless_clique(int n) {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v) e.emplace_back(u, v);
  return FeedbackGraph(n, e);
}

FeedbackGraph make_clique_union(std::span<const int> sizes) {
  int n = 0;
  for (int s : sizes) n += s;
  std::vector<std::pair<int, int>> e;
  int base = 0;
  for (int s : sizes) {
    if (s < 2) throw ConfigError("clique sizes must be >= 2");
    for (int u = 0; u < s; ++u)
      for (int v = 0; v < s; ++v)
        if (u != v) e.emplace_back(base + u, base + v);
    base += s;
  }
  return FeedbackGraph(n, e);
}

FeedbackGraph make_bipartite_union(std::span<const int> sizes) {
  int n = 0;
  for (int s : sizes) n += s;
  std::vector<std::pair<int, int>> e;
  int base = 0;
  for (int s : sizes) {
    if (s < 2 || s % 2 != 0) throw ConfigError("bipartite block sizes must be even and >= 2");
    const int half = s / 2;
    for (int u = 0; u < half; ++u) {
      for (int v = half; v < s; ++v) {
        e.emplace_back(base + u, base + v);
        e.emplace_back(base + v, base + u);
      }
    }
    base += s;
  }
  return FeedbackGraph(n, e);
}

FeedbackGraph make_directed_cycle(int n) {
  if (n < 2) throw ConfigError("cycle needs at least 2 vertices");
  std::vector<std::pair<int, int>> e;
  for (int v = 0; v < n; ++v) e.emplace_back(v, (v + 1) % n);
  return FeedbackGraph(n, e);
}

FeedbackGraph make_undirected_cycle(int n) {
  if (n < 3) throw ConfigError("undirected cycle needs at least 3 vertices");
  std::vector<std::pair<int, int>> e;
  for (int v = 0; v < n; ++v) {
    e.emplace_back(v, (v + 1) % n);
    e.emplace_back((v + 1) % n, v);
  }
  return FeedbackGraph(n, e);
}

FeedbackGraph make_hypercube(int n) {
  if (n < 1) throw ConfigError("hypercube dimension must be >= 1");
  if (n > 20) throw ConfigError("hypercube dimension too large");
  const int size = 1 << n;
  std::vector<std::pair<int, int>> e;
  for (int v = 0; v < size; ++v) {
    for (int b = 0; b < n; ++b) e.emplace_back(v, v ^ (1 << b));
  }
  return FeedbackGraph(size, e);
}

FeedbackGraph make_loopy_star(int leaves, int corrupted) {
  if (leaves < 1 || corrupted < 0 || corrupted > leaves) {
    throw ConfigError("loopy_star: need 0 <= corrupted <= leaves, leaves >= 1");
  }
  std::vector<std::pair<int, int>> e;
  e.emplace_back(0, 0);
  for (int i = 1; i <= leaves; ++i) {
    e.emplace_back(0, i);
    e.emplace_back(i, 0);
    if (i > corrupted) e.emplace_back(i, i);
  }
  return FeedbackGraph(leaves + 1, e);
}

FeedbackGraph make_corrupted_mab(int clean, int corrupted) {
  if (clean < 1 || corrupted < 0) throw ConfigError("corrupted_mab: need clean >= 1, corrupted >= 0");
  std::vector<std::pair<int, int>> e;
  for (int v = 0; v < clean; ++v) e.emplace_back(v, v);
  if (corrupted == 1) {
    e.emplace_back(0, clean);  // observed by one clean arm only
  } else if (corrupted > 1) {
    for (int i = 0; i < corrupted; ++i) {
      e.emplace_back(clean + i, clean + (i + 1) % corrupted);
    }
  }
  return FeedbackGraph(clean + corrupted, e);
}

}  // namespace graphbandit
