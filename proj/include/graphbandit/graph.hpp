#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace graphbandit {

enum class Observability { non_observable, weakly_observable, strongly_observable };

const char* to_string(Observability o);

// Directed feedback graph with optional self-loops. Pulling arm u reveals the
// losses of out_neighbors(u). Immutable after construction; safe for
// concurrent reads.
class FeedbackGraph {
 public:
  FeedbackGraph() = default;

  // Duplicate edges are dropped (count kept); out-of-range endpoints are
  // rejected.
  FeedbackGraph(int num_vertices, const std::vector<std::pair<int, int>>& edge_list);

  int num_vertices() const { return num_vertices_; }
  int num_edges() const { return num_edges_; }
  int duplicates_dropped() const { return duplicates_dropped_; }

  std::span<const int> in_neighbors(int v) const;
  std::span<const int> out_neighbors(int v) const;
  int in_degree(int v) const { return static_cast<int>(in_neighbors(v).size()); }
  int out_degree(int v) const { return static_cast<int>(out_neighbors(v).size()); }
  bool has_edge(int u, int v) const;
  bool has_self_loop(int v) const { return has_edge(v, v); }

  // Sorted (u, v) pairs.
  std::vector<std::pair<int, int>> edges() const;

  // File format: {"num_vertices": N, "edges": [[u, v], ...]}, 0-based ids.
  static FeedbackGraph load_json(const std::string& path);
  static FeedbackGraph parse_json(const std::string& text);
  std::string to_json() const;
  void save_json(const std::string& path) const;

 private:
  int num_vertices_ = 0;
  int num_edges_ = 0;
  int duplicates_dropped_ = 0;
  // CSR adjacency, neighbor lists sorted ascending.
  std::vector<int> out_ptr_, out_adj_;
  std::vector<int> in_ptr_, in_adj_;
};

struct ObservabilityClass {
  std::vector<Observability> vertex;
  Observability graph = Observability::non_observable;
};

// A vertex is non-observable iff it has no in-neighbor, strongly observable
// iff it has a self-loop or every other vertex observes it, weakly observable
// otherwise.
ObservabilityClass classify(const FeedbackGraph& g);

// Greedy t-packing independent set: ascending-id scan, adding a vertex when
// the set stays independent (no self-loops, no edges between members) and no
// vertex sends more than t edges into it. May return an empty set.
std::vector<int> greedy_packing_independent_set(const FeedbackGraph& g, int t);

// Incidence graph H of a partition: block i -> block j (i != j) iff some edge
// of g crosses from blocks[i] into blocks[j]. Never contains self-loops.
// Throws ConfigError if blocks do not partition the vertex set.
FeedbackGraph incidence_graph(const FeedbackGraph& g,
                              const std::vector<std::vector<int>>& blocks);

// Generators used by the experiment presets.
FeedbackGraph make_mab(int n);                        // isolated self-loops
FeedbackGraph make_loopless_clique(int n);
FeedbackGraph make_clique_union(std::span<const int> sizes);
FeedbackGraph make_bipartite_union(std::span<const int> sizes);  // K_{n/2,n/2} blocks
FeedbackGraph make_directed_cycle(int n);
FeedbackGraph make_undirected_cycle(int n);
FeedbackGraph make_hypercube(int n);                  // Q_n, undirected
// Star with a self-loop center observing every leaf (both directions); the
// first `corrupted` leaves lack self-loops, the rest have them.
FeedbackGraph make_loopy_star(int leaves, int corrupted);
// `clean` isolated self-loop arms plus `corrupted` extra arms arranged in a
// directed cycle among themselves (a single observed arm for corrupted == 1).
FeedbackGraph make_corrupted_mab(int clean, int corrupted);

}  // namespace graphbandit
