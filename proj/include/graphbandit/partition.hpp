#pragma once

#include <span>
#include <string>
#include <vector>

#include "graphbandit/graph.hpp"

namespace graphbandit {

// Optimal value and certificate of the per-block weak domination LP.
struct BlockLp {
  double delta_star = 0.0;
  std::vector<double> weights;  // aligned with the block's vertex order
};

// Throws IllegalPartition if G[block] is not observable. |block| >= 2.
BlockLp solve_block_lp(const FeedbackGraph& g, std::span<const int> block);

// A validated legal partition: every multi-vertex block induces an observable
// subgraph, every singleton block holds a vertex strongly observable in G.
// Index sets split [m] into U1^S (self-loop singletons), U1^Sbar (no-self-loop
// singletons) and U2 (multi-vertex blocks). Immutable after construction.
class LegalPartition {
 public:
  // Solves the per-block LPs, infers the index sets and builds the incidence
  // graph. Throws IllegalPartition naming the violated clause.
  static LegalPartition validate(const FeedbackGraph& g, std::vector<std::vector<int>> blocks);

  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int num_arms() const { return graph_.num_vertices(); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  std::span<const int> u1s() const { return u1s_; }
  std::span<const int> u1sbar() const { return u1sbar_; }
  std::span<const int> u2() const { return u2_; }
  bool in_u2(int k) const { return blocks_[k].size() > 1; }
  int block_size(int k) const { return static_cast<int>(blocks_[k].size()); }

  int block_of(int v) const { return block_of_[v]; }
  int index_in_block(int v) const { return index_in_block_[v]; }
  int arm(int k, int j) const { return blocks_[k][j]; }

  // Only defined for U2 blocks.
  const BlockLp& block_lp(int k) const;
  double delta_bar_star() const { return delta_bar_star_; }

  const FeedbackGraph& incidence() const { return incidence_; }
  const FeedbackGraph& graph() const { return graph_; }

  // Blocks file format: {"blocks": [[ids...], ...]}.
  static std::vector<std::vector<int>> load_blocks_json(const std::string& path);
  static void save_blocks_json(const std::string& path, const std::vector<std::vector<int>>& blocks);

 private:
  FeedbackGraph graph_;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> u1s_, u1sbar_, u2_;
  std::vector<int> block_of_, index_in_block_;
  std::vector<BlockLp> lp_;  // per block; empty weights for singletons
  double delta_bar_star_ = 0.0;
  FeedbackGraph incidence_;
};

// All-singleton partition (legal iff G is strongly observable).
LegalPartition build_singletons(const FeedbackGraph& g);

// Single block covering V (legal iff G is observable).
LegalPartition build_trivial(const FeedbackGraph& g);

// One block per weakly-connected component of size >= 2; isolated strongly
// observable vertices become singletons.
LegalPartition build_components(const FeedbackGraph& g);

// Corrupted-arms construction: U starts as the set of non-strongly-observable
// vertices; any member unobserved inside G[U] gets its lowest-id strongly
// observable in-neighbor added. Result: singletons of V \ U plus the block U,
// with |U| at most twice the corrupted count. Empty U gives all singletons.
LegalPartition build_c_corrupted(const FeedbackGraph& g);

struct HypercubePartition {
  FeedbackGraph graph;       // Q_n
  LegalPartition partition;  // blocks seeded by adjacent dominating pairs
  std::vector<int> dominating_set;
};

// Q_n partition from a dominating set built on perfect Hamming code cosets
// (n = 2^k - 1) extended inductively to all n. Every block has <= 2n vertices
// and per-block delta* <= 2.
HypercubePartition build_hypercube_partition(int n);

// The dominating set and its adjacent-pair decomposition (exposed for
// verification).
std::vector<int> hypercube_dominating_set(int n);
std::vector<std::pair<int, int>> hypercube_dominating_pairs(int n);

}  // namespace graphbandit
