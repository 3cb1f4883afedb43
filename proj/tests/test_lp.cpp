#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "graphbandit/graph.hpp"
#include "graphbandit/lp.hpp"
#include "graphbandit/rng.hpp"

using namespace graphbandit;

namespace {

// Independent oracle: enumerate polytope vertices of
//   {x : sum_{v in N_in(u)} x_v >= 1, 0 <= x <= 1}
// as intersections of n tight constraints and take the best feasible one.
// Exponential, for cross-checking small blocks only.
double vertex_enumeration_optimum(const FeedbackGraph& g, const std::vector<int>& block) {
  const int n = static_cast<int>(block.size());
  std::vector<int> pos(g.num_vertices(), -1);
  for (int j = 0; j < n; ++j) pos[block[j]] = j;

  // Constraint rows as (coefficients, rhs): cover rows, then x_j = 0, x_j = 1.
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (int u : block) {
    std::vector<double> row(n, 0.0);
    for (int v : g.in_neighbors(u)) {
      if (pos[v] >= 0) row[pos[v]] = 1.0;
    }
    rows.push_back(row);
    rhs.push_back(1.0);
  }
  for (int j = 0; j < n; ++j) {
    std::vector<double> row(n, 0.0);
    row[j] = 1.0;
    rows.push_back(row);
    rhs.push_back(0.0);
    rows.push_back(row);
    rhs.push_back(1.0);
  }
  const int total = static_cast<int>(rows.size());

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(n);
  std::iota(pick.begin(), pick.end(), 0);
  auto advance = [&]() {
    int i = n - 1;
    while (i >= 0 && pick[i] == total - n + i) --i;
    if (i < 0) return false;
    ++pick[i];
    for (int k = i + 1; k < n; ++k) pick[k] = pick[k - 1] + 1;
    return true;
  };
  do {
    // Solve the n x n system of the picked tight constraints.
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) a[r][c] = rows[pick[r]][c];
      a[r][n] = rhs[pick[r]];
    }
    bool singular = false;
    for (int col = 0; col < n && !singular; ++col) {
      int piv = -1;
      double best_abs = 1e-9;
      for (int r = col; r < n; ++r) {
        if (std::abs(a[r][col]) > best_abs) {
          best_abs = std::abs(a[r][col]);
          piv = r;
        }
      }
      if (piv < 0) {
        singular = true;
        break;
      }
      std::swap(a[col], a[piv]);
      for (int r = 0; r < n; ++r) {
        if (r == col) continue;
        const double f = a[r][col] / a[col][col];
        for (int c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
      }
    }
    if (singular) continue;
    std::vector<double> x(n);
    for (int j = 0; j < n; ++j) x[j] = a[j][n] / a[j][j];
    bool feasible = true;
    for (int j = 0; j < n && feasible; ++j) feasible = x[j] >= -1e-9 && x[j] <= 1.0 + 1e-9;
    for (int r = 0; r < n && feasible; ++r) {
      double lhs = 0.0;
      for (int c = 0; c < n; ++c) lhs += rows[r][c] * x[c];
      feasible = lhs >= 1.0 - 1e-9;
    }
    if (feasible) best = std::min(best, std::accumulate(x.begin(), x.end(), 0.0));
  } while (advance());
  return best;
}

std::vector<int> full_block(int n) {
  std::vector<int> b(n);
  std::iota(b.begin(), b.end(), 0);
  return b;
}

void check_feasible(const FeedbackGraph& g, const std::vector<int>& block,
                    const std::vector<double>& x) {
  std::vector<int> pos(g.num_vertices(), -1);
  for (size_t j = 0; j < block.size(); ++j) pos[block[j]] = static_cast<int>(j);
  for (int u : block) {
    double cover = 0.0;
    for (int v : g.in_neighbors(u)) {
      if (pos[v] >= 0) cover += x[pos[v]];
    }
    CHECK(cover >= 1.0 - 1e-6);
  }
  for (double v : x) {
    CHECK(v >= -1e-9);
    CHECK(v <= 1.0 + 1e-9);
  }
}

}  // namespace

TEST_CASE("directed cycles force delta* = n") {
  for (int n = 2; n <= 8; ++n) {
    const auto g = make_directed_cycle(n);
    const auto r = solve_weak_domination_lp(g, full_block(n));
    REQUIRE(r.feasible);
    CHECK(r.objective == doctest::Approx(n).epsilon(1e-6));
    for (double x : r.x) CHECK(x == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("complete bipartite graphs have delta* = 2") {
  for (int a = 1; a <= 4; ++a) {
    for (int b = 1; b <= 4; ++b) {
      std::vector<std::pair<int, int>> e;
      for (int u = 0; u < a; ++u) {
        for (int v = a; v < a + b; ++v) {
          e.emplace_back(u, v);
          e.emplace_back(v, u);
        }
      }
      const FeedbackGraph g(a + b, e);
      const auto r = solve_weak_domination_lp(g, full_block(a + b));
      REQUIRE(r.feasible);
      CHECK(r.objective == doctest::Approx(2.0).epsilon(1e-6));
      check_feasible(g, full_block(a + b), r.x);
    }
  }
}

TEST_CASE("loop-less cliques have delta* = n/(n-1)") {
  for (int n = 2; n <= 8; ++n) {
    const auto g = make_loopless_clique(n);
    const auto r = solve_weak_domination_lp(g, full_block(n));
    REQUIRE(r.feasible);
    CHECK(r.objective == doctest::Approx(n / (n - 1.0)).epsilon(1e-6));
    check_feasible(g, full_block(n), r.x);
  }
}

TEST_CASE("simplex optimum matches vertex enumeration on cliques") {
  for (int n = 2; n <= 5; ++n) {
    const auto g = make_loopless_clique(n);
    const double oracle = vertex_enumeration_optimum(g, full_block(n));
    const auto r = solve_weak_domination_lp(g, full_block(n));
    REQUIRE(r.feasible);
    CHECK(r.objective == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("simplex optimum matches vertex enumeration on random observable blocks") {
  Philox rng(5150, 0);
  int tested = 0;
  while (tested < 25) {
    const int n = 2 + static_cast<int>(rng.next_double() * 4);  // up to 5 vertices
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u != v && rng.next_double() < 0.5) e.emplace_back(u, v);
      }
    }
    const FeedbackGraph g(n, e);
    const auto r = solve_weak_domination_lp(g, full_block(n));
    const double oracle = vertex_enumeration_optimum(g, full_block(n));
    if (!r.feasible) {
      CHECK(std::isinf(oracle));
      continue;
    }
    CHECK(r.objective == doctest::Approx(oracle).epsilon(1e-8));
    check_feasible(g, full_block(n), r.x);
    ++tested;
  }
}

TEST_CASE("unobserved vertex inside the block makes the LP infeasible") {
  // 0 -> 1 -> 2, block {1, 2}: vertex 1 has no in-neighbor inside.
  const FeedbackGraph g(3, {{0, 1}, {1, 2}});
  const auto r = solve_weak_domination_lp(g, std::vector<int>{1, 2});
  CHECK_FALSE(r.feasible);
}

TEST_CASE("objective perturbation moves the optimum by less than 1e-6") {
  Philox rng(77, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_double() * 4);
    std::vector<std::pair<int, int>> e;
    for (int v = 0; v < n; ++v) e.emplace_back(v, (v + 1) % n);  // cycle keeps it observable
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u != v && rng.next_double() < 0.3) e.emplace_back(u, v);
      }
    }
    const FeedbackGraph g(n, e);
    const auto base = solve_weak_domination_lp(g, full_block(n));
    REQUIRE(base.feasible);
    std::vector<double> perturbed(n, 1.0 + 1e-9);
    const auto r = solve_weak_domination_lp(g, full_block(n), perturbed);
    REQUIRE(r.feasible);
    double plain_objective = 0.0;
    for (double x : r.x) plain_objective += x;
    CHECK(std::abs(plain_objective - base.objective) < 1e-6);
  }
}
