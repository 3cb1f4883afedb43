#pragma once

// Test-only numeric oracles, independent of the library's dual-multiplier
// solver: objective evaluation from first principles plus pairwise
// golden-section descent over the simplex.

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "graphbandit/potentials.hpp"

namespace oracle {

inline double psi_value(graphbandit::PotentialSpec s, double x) {
  if (x < 0.0) return std::numeric_limits<double>::infinity();
  if (s.kind == graphbandit::PotentialKind::negative_entropy) {
    return x == 0.0 ? 0.0 : x * std::log(x) / s.rate;
  }
  return -std::sqrt(x) / s.rate;
}

inline double psi_grad(graphbandit::PotentialSpec s, double x) {
  if (s.kind == graphbandit::PotentialKind::negative_entropy) {
    return (std::log(x) + 1.0) / s.rate;
  }
  return -1.0 / (2.0 * s.rate * std::sqrt(x));
}

// step * <x, loss> + B_Psi(x, x0); x0 must be interior.
inline double mirror_objective(const graphbandit::SeparablePotential& pot,
                               std::span<const double> x0, std::span<const double> loss,
                               double step, std::span<const double> x) {
  double f = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const auto& s = pot.coords[i];
    f += step * loss[i] * x[i];
    f += psi_value(s, x[i]) - psi_value(s, x0[i]) - psi_grad(s, x0[i]) * (x[i] - x0[i]);
  }
  return f;
}

inline double golden_min(const std::function<double(double)>& f, double lo, double hi,
                         int iters = 200) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Minimize a convex function over the simplex by repeatedly moving mass
// between coordinate pairs with golden-section line search.
inline std::vector<double> simplex_min(const std::function<double(std::span<const double>)>& f,
                                       std::vector<double> x, int sweeps = 400) {
  const size_t n = x.size();
  std::vector<double> trial = x;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double improved = 0.0;
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        const double base = f(x);
        auto line = [&](double delta) {
          trial = x;
          trial[i] = x[i] + delta;
          trial[j] = x[j] - delta;
          return f(trial);
        };
        const double delta = golden_min(line, -x[i], x[j], 120);
        if (line(delta) < base) {
          improved += base - line(delta);
          x[i] += delta;
          x[j] -= delta;
        }
      }
    }
    if (improved < 1e-16) break;
  }
  return x;
}

inline std::vector<double> mirror_step_oracle(const graphbandit::SeparablePotential& pot,
                                              std::span<const double> x0,
                                              std::span<const double> loss, double step) {
  std::vector<double> start(x0.begin(), x0.end());
  auto f = [&](std::span<const double> x) { return mirror_objective(pot, x0, loss, step, x); };
  return simplex_min(f, start);
}

}  // namespace oracle
