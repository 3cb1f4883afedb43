#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "graphbandit/errors.hpp"
#include "graphbandit/graph.hpp"
#include "graphbandit/rng.hpp"

using namespace graphbandit;

namespace {

// Brute-force checks used as independent oracles against the greedy set.
bool is_independent(const FeedbackGraph& g, const std::vector<int>& s) {
  for (int v : s) {
    if (g.has_self_loop(v)) return false;
    for (int w : s) {
      if (v != w && (g.has_edge(v, w) || g.has_edge(w, v))) return false;
    }
  }
  return true;
}

bool is_t_packing(const FeedbackGraph& g, const std::vector<int>& s, int t) {
  std::set<int> in_s(s.begin(), s.end());
  for (int u = 0; u < g.num_vertices(); ++u) {
    int count = 0;
    for (int w : g.out_neighbors(u)) count += in_s.count(w);
    if (count > t) return false;
  }
  return true;
}

FeedbackGraph random_graph(Philox& rng, int n, double p, bool self_loops) {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == v && !self_loops) continue;
      if (rng.next_double() < p) e.emplace_back(u, v);
    }
  }
  return FeedbackGraph(n, e);
}

}  // namespace

TEST_CASE("classify: MAB graph is strongly observable") {
  const auto g = make_mab(5);
  const auto obs = classify(g);
  CHECK(obs.graph == Observability::strongly_observable);
  for (auto v : obs.vertex) CHECK(v == Observability::strongly_observable);
}

TEST_CASE("classify: single bare vertex is non-observable") {
  const FeedbackGraph g(1, {});
  const auto obs = classify(g);
  CHECK(obs.graph == Observability::non_observable);
  CHECK(obs.vertex[0] == Observability::non_observable);
}

TEST_CASE("classify: directed 3-cycle is weakly observable") {
  const auto g = make_directed_cycle(3);
  const auto obs = classify(g);
  CHECK(obs.graph == Observability::weakly_observable);
  for (auto v : obs.vertex) CHECK(v == Observability::weakly_observable);
}

TEST_CASE("classify: loop-less complete graph is strongly observable") {
  const auto obs = classify(make_loopless_clique(4));
  CHECK(obs.graph == Observability::strongly_observable);
}

TEST_CASE("classify depends only on the edge set") {
  // Same edges given in different orders, with duplicates.
  const FeedbackGraph a(3, {{0, 1}, {1, 2}, {0, 0}});
  const FeedbackGraph b(3, {{1, 2}, {0, 0}, {0, 1}, {0, 1}});
  CHECK(b.duplicates_dropped() == 1);
  const auto oa = classify(a), ob = classify(b);
  CHECK(oa.graph == ob.graph);
  CHECK(oa.vertex == ob.vertex);
}

TEST_CASE("greedy packing set on the 6-cycle") {
  const auto g = make_directed_cycle(6);
  const auto s = greedy_packing_independent_set(g, 1);
  CHECK(s == std::vector<int>{0, 2, 4});
  CHECK(is_independent(g, s));
  CHECK(is_t_packing(g, s, 1));
}

TEST_CASE("greedy packing set on a loop-less triangle") {
  const auto s = greedy_packing_independent_set(make_loopless_clique(3), 1);
  CHECK(s == std::vector<int>{0});
}

TEST_CASE("greedy packing set skips self-loop vertices") {
  CHECK(greedy_packing_independent_set(make_mab(4), 1).empty());
  CHECK(greedy_packing_independent_set(make_mab(4), 3).empty());
}

TEST_CASE("greedy packing set on even cycles has size n/2") {
  for (int n = 4; n <= 12; n += 2) {
    const auto s = greedy_packing_independent_set(make_directed_cycle(n), 1);
    CHECK(static_cast<int>(s.size()) == n / 2);
  }
}

TEST_CASE("greedy packing set verified by brute force on random graphs") {
  Philox rng(2024, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_double() * 8);
    const int t = 1 + static_cast<int>(rng.next_double() * 3);
    const auto g = random_graph(rng, n, 0.3, true);
    const auto s = greedy_packing_independent_set(g, t);
    CHECK(is_independent(g, s));
    CHECK(is_t_packing(g, s, t));
    // Maximality: no skipped vertex could still be added.
    for (int v = 0; v < n; ++v) {
      if (std::find(s.begin(), s.end(), v) != s.end()) continue;
      auto extended = s;
      extended.push_back(v);
      const bool could_add = is_independent(g, extended) && is_t_packing(g, extended, t);
      CHECK_FALSE(could_add);
    }
  }
}

TEST_CASE("incidence graph of two disjoint undirected edges") {
  const FeedbackGraph g(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}});
  const auto h = incidence_graph(g, {{0, 1}, {2, 3}});
  CHECK(h.num_vertices() == 2);
  CHECK(h.num_edges() == 0);
}

TEST_CASE("incidence graph keeps only cross-block edges") {
  const FeedbackGraph g(2, {{0, 1}});
  const auto h = incidence_graph(g, {{0}, {1}});
  CHECK(h.edges() == std::vector<std::pair<int, int>>{{0, 1}});
}

TEST_CASE("incidence graph over singletons equals the graph minus self-loops") {
  Philox rng(11, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_double() * 7);
    const auto g = random_graph(rng, n, 0.4, true);
    std::vector<std::vector<int>> blocks;
    for (int v = 0; v < n; ++v) blocks.push_back({v});
    const auto h = incidence_graph(g, blocks);
    // Independent edge-set comparison by pairwise scan.
    std::set<std::pair<int, int>> expected;
    for (const auto& [u, v] : g.edges()) {
      if (u != v) expected.insert({u, v});
    }
    const auto got = h.edges();
    CHECK(std::set<std::pair<int, int>>(got.begin(), got.end()) == expected);
  }
}

TEST_CASE("incidence graph rejects non-partitions") {
  const FeedbackGraph g(3, {{0, 1}});
  CHECK_THROWS_AS(incidence_graph(g, {{0, 1}, {1, 2}}), ConfigError);
  CHECK_THROWS_AS(incidence_graph(g, {{0, 1}}), ConfigError);
}

TEST_CASE("graph json round trip and validation") {
  const auto g = make_corrupted_mab(3, 2);
  const auto parsed = FeedbackGraph::parse_json(g.to_json());
  CHECK(parsed.num_vertices() == g.num_vertices());
  CHECK(parsed.edges() == g.edges());

  CHECK_THROWS_AS(FeedbackGraph::parse_json(R"({"num_vertices": 2, "edges": [[0, 5]]})"),
                  ConfigError);
  CHECK_THROWS_AS(FeedbackGraph::parse_json(R"({"edges": []})"), ConfigError);
  // Duplicates are dropped silently with a counter.
  const auto dup =
      FeedbackGraph::parse_json(R"({"num_vertices": 2, "edges": [[0,1],[0,1],[1,1]]})");
  CHECK(dup.num_edges() == 2);
  CHECK(dup.duplicates_dropped() == 1);
}

TEST_CASE("generator shapes") {
  CHECK(make_hypercube(3).num_edges() == 24);  // n 2^n directed arcs
  CHECK(make_bipartite_union(std::vector<int>{4}).num_edges() == 8);
  const auto star = make_loopy_star(4, 2);
  const auto obs = classify(star);
  CHECK(obs.vertex[0] == Observability::strongly_observable);
  CHECK(obs.vertex[1] == Observability::weakly_observable);
  CHECK(obs.vertex[3] == Observability::strongly_observable);
  const auto cmab = make_corrupted_mab(6, 2);
  const auto obs2 = classify(cmab);
  CHECK(obs2.graph == Observability::weakly_observable);
  int weak = 0;
  for (auto v : obs2.vertex) weak += v == Observability::weakly_observable;
  CHECK(weak == 2);
}
