#include "graphbandit/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "graphbandit/errors.hpp"

namespace graphbandit {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-9;

// Tableau rows: m constraint rows plus one objective row. Column layout:
// structural/slack columns then artificials; last column is the RHS.
struct Tableau {
  int rows, cols;  // constraint rows, total columns incl. RHS
  std::vector<std::vector<double>> t;
  std::vector<int> basis;

  double& at(int r, int c) { return t[r][c]; }

  void pivot(int pr, int pc) {
    const double pv = t[pr][pc];
    for (int c = 0; c < cols; ++c) t[pr][c] /= pv;
    for (int r = 0; r <= rows; ++r) {
      if (r == pr) continue;
      const double f = t[r][pc];
      if (f == 0.0) continue;
      for (int c = 0; c < cols; ++c) t[r][c] -= f * t[pr][c];
    }
    basis[pr] = pc;
  }

  // Bland's rule: entering = lowest-index column with negative reduced cost,
  // leaving = lowest-index basic variable among the min-ratio rows.
  // Returns iterations, or -1 if unbounded.
  int run(int num_vars, int max_iter) {
    int iters = 0;
    while (iters < max_iter) {
      int pc = -1;
      for (int c = 0; c < num_vars; ++c) {
        if (t[rows][c] < -kPivotTol) { pc = c; break; }
      }
      if (pc < 0) return iters;
      int pr = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows; ++r) {
        if (t[r][pc] > kPivotTol) {
          const double ratio = t[r][cols - 1] / t[r][pc];
          if (ratio < best_ratio - kPivotTol ||
              (ratio < best_ratio + kPivotTol && (pr < 0 || basis[r] < basis[pr]))) {
            best_ratio = ratio;
            pr = r;
          }
        }
      }
      if (pr < 0) return -1;
      pivot(pr, pc);
      ++iters;
    }
    throw RunFailure("simplex iteration cap exceeded");
  }
};

}  // namespace

LpResult simplex_standard_min(const std::vector<std::vector<double>>& a,
                              std::span<const double> b, std::span<const double> c) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(c.size());
  for (double bi : b) {
    if (bi < 0) throw ConfigError("simplex_standard_min requires b >= 0");
  }

  Tableau tab;
  tab.rows = m;
  tab.cols = n + m + 1;  // structural + artificial + RHS
  tab.t.assign(m + 1, std::vector<double>(tab.cols, 0.0));
  tab.basis.resize(m);
  for (int r = 0; r < m; ++r) {
    for (int j = 0; j < n; ++j) tab.t[r][j] = a[r][j];
    tab.t[r][n + r] = 1.0;
    tab.t[r][tab.cols - 1] = b[r];
    tab.basis[r] = n + r;
  }
  // Phase 1: minimize the sum of artificials.
  for (int r = 0; r < m; ++r) {
    for (int c2 = 0; c2 < tab.cols; ++c2) {
      if (c2 >= n && c2 < n + m) continue;
      tab.t[m][c2] -= tab.t[r][c2];
    }
  }
  LpResult result;
  const int max_iter = 2000 + 200 * (n + m);
  int it1 = tab.run(n + m, max_iter);
  if (it1 < 0) throw RunFailure("phase-1 LP unbounded (internal error)");
  result.iterations = it1;
  if (tab.t[m][tab.cols - 1] < -kFeasTol * (1 + static_cast<double>(m))) {
    result.feasible = false;
    return result;
  }
  // Drive any artificial still in the basis out (degenerate rows).
  for (int r = 0; r < m; ++r) {
    if (tab.basis[r] >= n) {
      int pc = -1;
      for (int c2 = 0; c2 < n; ++c2) {
        if (std::abs(tab.t[r][c2]) > kPivotTol) { pc = c2; break; }
      }
      if (pc >= 0) tab.pivot(r, pc);
      // Otherwise the row is all-zero over structurals: redundant constraint.
    }
  }
  // Phase 2: swap in the real objective, zero out reduced costs of the basis.
  for (int c2 = 0; c2 < tab.cols; ++c2) tab.t[m][c2] = 0.0;
  for (int j = 0; j < n; ++j) tab.t[m][j] = c[j];
  for (int r = 0; r < m; ++r) {
    const int bj = tab.basis[r];
    if (bj < n && tab.t[m][bj] != 0.0) {
      const double f = tab.t[m][bj];
      for (int c2 = 0; c2 < tab.cols; ++c2) tab.t[m][c2] -= f * tab.t[r][c2];
    }
  }
  int it2 = tab.run(n, max_iter);  // artificials stay out: exclude their columns
  if (it2 < 0) throw RunFailure("LP unbounded");
  result.iterations += it2;
  result.feasible = true;
  result.x.assign(n, 0.0);
  for (int r = 0; r < m; ++r) {
    if (tab.basis[r] < n) result.x[tab.basis[r]] = tab.t[r][tab.cols - 1];
  }
  result.objective = 0.0;
  for (int j = 0; j < n; ++j) result.objective += c[j] * result.x[j];
  return result;
}

LpResult solve_weak_domination_lp(const FeedbackGraph& g, std::span<const int> block,
                                  std::span<const double> objective) {
  const int n = static_cast<int>(block.size());
  if (n < 2) throw ConfigError("weak domination LP needs a block of size >= 2");
  std::vector<int> pos(g.num_vertices(), -1);
  for (int j = 0; j < n; ++j) pos[block[j]] = j;

  // Standard form with surplus s and bound-slack w:
  //   sum_{v in N_in(u) ∩ block} x_v - s_u = 1,   x_v + w_v = 1.
  const int vars = 3 * n;  // x | s | w
  std::vector<std::vector<double>> a(2 * n, std::vector<double>(vars, 0.0));
  std::vector<double> b(2 * n, 1.0);
  std::vector<double> c(vars, 0.0);
  for (int j = 0; j < n; ++j) c[j] = objective.empty() ? 1.0 : objective[j];

  for (int row = 0; row < n; ++row) {
    const int u = block[row];
    bool covered = false;
    for (int v : g.in_neighbors(u)) {
      if (pos[v] >= 0) {
        a[row][pos[v]] = 1.0;
        covered = true;
      }
    }
    a[row][n + row] = -1.0;
    if (!covered) {
      LpResult r;
      r.feasible = false;
      return r;
    }
  }
  for (int j = 0; j < n; ++j) {
    a[n + j][j] = 1.0;
    a[n + j][2 * n + j] = 1.0;
  }

  LpResult full = simplex_standard_min(a, b, c);
  if (!full.feasible) return full;
  full.x.resize(n);
  return full;
}

}  // namespace graphbandit
