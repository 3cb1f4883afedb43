#include "graphbandit/partition.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "graphbandit/errors.hpp"
#include "graphbandit/lp.hpp"
#include "json.hpp"

namespace graphbandit {

BlockLp solve_block_lp(const FeedbackGraph& g, std::span<const int> block) {
  LpResult r = solve_weak_domination_lp(g, block);
  if (!r.feasible) {
    throw IllegalPartition("block induces a non-observable subgraph (LP infeasible)");
  }
  BlockLp out;
  out.delta_star = r.objective;
  out.weights = std::move(r.x);
  return out;
}

LegalPartition LegalPartition::validate(const FeedbackGraph& g,
                                        std::vector<std::vector<int>> blocks) {
  LegalPartition p;
  p.graph_ = g;
  const int n = g.num_vertices();
  p.block_of_.assign(n, -1);
  p.index_in_block_.assign(n, -1);
  for (auto& blk : blocks) std::sort(blk.begin(), blk.end());
  p.blocks_ = std::move(blocks);

  const int m = static_cast<int>(p.blocks_.size());
  if (m == 0) throw IllegalPartition("partition has no blocks");
  for (int k = 0; k < m; ++k) {
    if (p.blocks_[k].empty()) throw IllegalPartition("empty block " + std::to_string(k));
    for (size_t j = 0; j < p.blocks_[k].size(); ++j) {
      const int v = p.blocks_[k][j];
      if (v < 0 || v >= n) {
        throw IllegalPartition("block vertex " + std::to_string(v) + " out of range");
      }
      if (p.block_of_[v] != -1) {
        throw IllegalPartition("vertex " + std::to_string(v) + " appears in two blocks");
      }
      p.block_of_[v] = k;
      p.index_in_block_[v] = static_cast<int>(j);
    }
  }
  for (int v = 0; v < n; ++v) {
    if (p.block_of_[v] == -1) {
      throw IllegalPartition("vertex " + std::to_string(v) + " missing from the partition");
    }
  }

  const ObservabilityClass obs = classify(g);
  p.lp_.resize(m);
  for (int k = 0; k < m; ++k) {
    const auto& blk = p.blocks_[k];
    if (blk.size() == 1) {
      const int v = blk[0];
      if (obs.vertex[v] != Observability::strongly_observable) {
        throw IllegalPartition("singleton block {" + std::to_string(v) +
                               "}: vertex is not strongly observable in G");
      }
      if (g.has_self_loop(v)) {
        p.u1s_.push_back(k);
      } else {
        p.u1sbar_.push_back(k);
      }
    } else {
      // Observability of G[block]: every vertex needs an in-neighbor inside.
      for (int u : blk) {
        bool covered = false;
        for (int w : g.in_neighbors(u)) {
          if (p.block_of_[w] == k) { covered = true; break; }
        }
        if (!covered) {
          throw IllegalPartition("block " + std::to_string(k) + ": vertex " +
                                 std::to_string(u) + " is unobserved inside its block");
        }
      }
      p.u2_.push_back(k);
      p.lp_[k] = solve_block_lp(g, blk);
      p.delta_bar_star_ += p.lp_[k].delta_star;
    }
  }
  p.incidence_ = incidence_graph(g, p.blocks_);
  return p;
}

const BlockLp& LegalPartition::block_lp(int k) const {
  if (blocks_[k].size() < 2) throw ConfigError("block_lp: singleton blocks carry no LP");
  return lp_[k];
}

std::vector<std::vector<int>> LegalPartition::load_blocks_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open blocks file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("blocks file is not valid JSON: ") + e.what());
  }
  if (!j.contains("blocks")) throw ConfigError("blocks file must contain a blocks array");
  std::vector<std::vector<int>> blocks;
  for (const auto& blk : j.at("blocks")) blocks.push_back(blk.get<std::vector<int>>());
  return blocks;
}

void LegalPartition::save_blocks_json(const std::string& path,
                                      const std::vector<std::vector<int>>& blocks) {
  nlohmann::ordered_json j;
  j["blocks"] = blocks;
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write blocks file: " + path);
  out << j.dump(2) << "\n";
}

LegalPartition build_singletons(const FeedbackGraph& g) {
  std::vector<std::vector<int>> blocks;
  for (int v = 0; v < g.num_vertices(); ++v) blocks.push_back({v});
  return LegalPartition::validate(g, std::move(blocks));
}

LegalPartition build_trivial(const FeedbackGraph& g) {
  std::vector<int> all(g.num_vertices());
  std::iota(all.begin(), all.end(), 0);
  return LegalPartition::validate(g, {all});
}

LegalPartition build_components(const FeedbackGraph& g) {
  const int n = g.num_vertices();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& [u, v] : g.edges()) {
    if (u != v) parent[find(u)] = find(v);
  }
  std::vector<std::vector<int>> groups(n);
  for (int v = 0; v < n; ++v) groups[find(v)].push_back(v);
  std::vector<std::vector<int>> blocks;
  for (auto& grp : groups) {
    if (!grp.empty()) blocks.push_back(std::move(grp));
  }
  return LegalPartition::validate(g, std::move(blocks));
}

LegalPartition build_c_corrupted(const FeedbackGraph& g) {
  const ObservabilityClass obs = classify(g);
  if (obs.graph == Observability::non_observable) {
    throw ConfigError("c-corrupted construction requires an observable graph");
  }
  const int n = g.num_vertices();
  std::vector<char> in_u(n, 0);
  std::vector<int> corrupted;
  for (int v = 0; v < n; ++v) {
    if (obs.vertex[v] != Observability::strongly_observable) {
      in_u[v] = 1;
      corrupted.push_back(v);
    }
  }
  // Each corrupted vertex unobserved inside G[U] pulls in one strongly
  // observable in-neighbor (lowest id); |U| grows to at most 2C.
  for (int u : corrupted) {
    bool covered = false;
    for (int w : g.in_neighbors(u)) {
      if (in_u[w]) { covered = true; break; }
    }
    if (covered) continue;
    int pick = -1;
    for (int w : g.in_neighbors(u)) {
      if (obs.vertex[w] == Observability::strongly_observable) { pick = w; break; }
    }
    if (pick < 0) {
      throw ConfigError("corrupted vertex " + std::to_string(u) +
                        " has no strongly observable in-neighbor to attach");
    }
    in_u[pick] = 1;
  }
  std::vector<std::vector<int>> blocks;
  std::vector<int> u_block;
  for (int v = 0; v < n; ++v) {
    if (in_u[v]) {
      u_block.push_back(v);
    } else {
      blocks.push_back({v});
    }
  }
  if (!u_block.empty()) blocks.push_back(std::move(u_block));
  return LegalPartition::validate(g, std::move(blocks));
}

namespace {

// Parity-check positions of the [2^k - 1, 2^k - 1 - k] Hamming code: a word w
// is a codeword iff for every bit position b of the syndrome,
// xor of the positions (1-based) of set bits of w is zero.
int hamming_syndrome(int word, int n) {
  int syn = 0;
  for (int i = 0; i < n; ++i) {
    if (word & (1 << i)) syn ^= (i + 1);
  }
  return syn;
}

}  // namespace

std::vector<std::pair<int, int>> hypercube_dominating_pairs(int n) {
  if (n < 1) throw ConfigError("hypercube dimension must be >= 1");
  int k = 1;
  while ((1 << (k + 1)) - 1 <= n) ++k;  // 2^k - 1 <= n < 2^{k+1} - 1
  const int base = (1 << k) - 1;
  // Base case n = 2^k - 1: the perfect code paired with its shift by e1.
  std::vector<std::pair<int, int>> pairs;
  for (int w = 0; w < (1 << base); ++w) {
    if (hamming_syndrome(w, base) == 0) pairs.emplace_back(w, w ^ 1);
  }
  // Extension step: a string ending in 1 spawns ~01 and ~10, a string ending
  // in 0 spawns ~00 and ~11; the four extensions of a pair re-pair. With
  // bit i = coordinate i+1, the last coordinate of a length-dim string is
  // bit dim-1.
  for (int dim = base; dim < n; ++dim) {
    const int last = 1 << (dim - 1);
    const int added = 1 << dim;
    auto extend = [&](int w) -> std::pair<int, int> {
      const int prefix = w & (last - 1);
      if (w & last) return {prefix | added, prefix | last};      // ~01, ~10
      return {prefix, prefix | last | added};                     // ~00, ~11
    };
    std::vector<std::pair<int, int>> next;
    next.reserve(pairs.size() * 2);
    for (const auto& [u, v] : pairs) {
      // Corresponding extensions of an adjacent pair are adjacent again, both
      // when the pair differs in the last coordinate (~01/~00 and ~10/~11)
      // and when it differs earlier.
      const auto [u1, u2] = extend(u);
      const auto [v1, v2] = extend(v);
      next.emplace_back(u1, v1);
      next.emplace_back(u2, v2);
    }
    pairs = std::move(next);
  }
  return pairs;
}

std::vector<int> hypercube_dominating_set(int n) {
  std::vector<int> d;
  for (const auto& [u, v] : hypercube_dominating_pairs(n)) {
    d.push_back(u);
    d.push_back(v);
  }
  std::sort(d.begin(), d.end());
  return d;
}

HypercubePartition build_hypercube_partition(int n) {
  HypercubePartition out;
  out.graph = make_hypercube(n);
  const auto pairs = hypercube_dominating_pairs(n);
  const int size = 1 << n;

  std::vector<char> in_d(size, 0);
  std::vector<std::vector<int>> blocks;
  std::vector<int> block_of(size, -1);
  for (const auto& [u, v] : pairs) {
    in_d[u] = in_d[v] = 1;
    block_of[u] = block_of[v] = static_cast<int>(blocks.size());
    blocks.push_back({u, v});
    out.dominating_set.push_back(u);
    out.dominating_set.push_back(v);
  }
  std::sort(out.dominating_set.begin(), out.dominating_set.end());
  // Attach every remaining vertex to the block of its lowest-id dominating
  // neighbor (or itself -- cannot happen since it is not in D).
  for (int v = 0; v < size; ++v) {
    if (in_d[v]) continue;
    int pick = -1;
    for (int b = 0; b < n; ++b) {
      const int u = v ^ (1 << b);
      if (in_d[u] && (pick == -1 || u < pick)) pick = u;
    }
    if (pick == -1) throw RunFailure("vertex not dominated (construction bug)");
    blocks[block_of[pick]].push_back(v);
  }
  out.partition = LegalPartition::validate(out.graph, std::move(blocks));
  return out;
}

}  // namespace graphbandit
