#pragma once

#include <span>
#include <vector>

#include "graphbandit/graph.hpp"

namespace graphbandit {

struct LpResult {
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> x;
  int iterations = 0;
};

// Two-phase dense tableau simplex with Bland's rule.
// Solves  min c.x  s.t.  A x = b, x >= 0  with b >= 0 (caller arranges signs).
LpResult simplex_standard_min(const std::vector<std::vector<double>>& a,
                              std::span<const double> b, std::span<const double> c);

// Fractional weak domination LP on G[block]:
//   min sum_v obj_v x_v  s.t.  sum_{v in N_in(u) ∩ block} x_v >= 1 for all u,
//   0 <= x_v <= 1.
// `objective` defaults to all-ones; x is indexed by position in `block`.
// Infeasible (some vertex unobserved inside the block) => feasible == false.
LpResult solve_weak_domination_lp(const FeedbackGraph& g, std::span<const int> block,
                                  std::span<const double> objective = {});

}  // namespace graphbandit
