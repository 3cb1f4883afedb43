#include "graphbandit/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "graphbandit/errors.hpp"

namespace graphbandit {

namespace {

// Coordinates below this are treated as exactly zero so Tsallis gradients
// (x^{-1/2}) cannot overflow.
constexpr double kZeroTol = 1e-15;
constexpr double kDualTol = 1e-13;
constexpr int kDualMaxIter = 100;

inline double clamped_exp(double a) { return std::exp(std::min(a, 709.0)); }

// One simplex coordinate as a function of the dual multiplier:
//   negative_entropy: x(l) = exp(shift - rate * l)
//   tsallis_half:     x(l) = (shift + 2 rate l)^{-2}, valid where positive
// Both are strictly decreasing in l, which makes sum x(l) = 1 solvable by
// safeguarded Newton.
struct DualCoord {
  PotentialKind kind;
  double rate;
  double shift;
  bool pinned;
};

double coord_value(const DualCoord& c, double l) {
  if (c.pinned) return 0.0;
  if (c.kind == PotentialKind::negative_entropy) return clamped_exp(c.shift - c.rate * l);
  const double den = c.shift + 2.0 * c.rate * l;
  if (den <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (den * den);
}

double coord_slope(const DualCoord& c, double value) {
  if (c.pinned || value == 0.0) return 0.0;
  if (c.kind == PotentialKind::negative_entropy) return -c.rate * value;
  return -4.0 * c.rate * value * std::sqrt(value);
}

std::vector<double> solve_dual(std::span<const DualCoord> coords, MirrorStepStats* stats) {
  const size_t n = coords.size();
  auto sum_at = [&](double l) {
    double s = 0.0;
    for (const auto& c : coords) s += coord_value(c, l);
    return s;
  };

  // Lower limit of the feasible dual range (Tsallis denominators positive).
  double floor_l = -std::numeric_limits<double>::infinity();
  bool any_active = false;
  for (const auto& c : coords) {
    if (c.pinned) continue;
    any_active = true;
    if (c.kind == PotentialKind::tsallis_half) {
      floor_l = std::max(floor_l, -c.shift / (2.0 * c.rate));
    }
  }
  if (!any_active) throw std::invalid_argument("mirror step: all coordinates are zero");

  // Bracket [lo, hi] with sum(lo) >= 1 >= sum(hi).
  double lo, hi;
  if (std::isfinite(floor_l)) {
    double off = 1.0;
    hi = floor_l + off;
    for (int i = 0; i < 300 && sum_at(hi) > 1.0; ++i) {
      off *= 2.0;
      hi = floor_l + off;
    }
    off = 1.0;
    lo = floor_l + off;
    for (int i = 0; i < 300 && sum_at(lo) < 1.0; ++i) {
      off *= 0.5;
      lo = floor_l + off;
    }
    if (sum_at(lo) < 1.0) lo = floor_l;  // sum explodes at the floor
  } else {
    lo = 0.0;
    double step = 1.0;
    for (int i = 0; i < 300 && sum_at(lo) < 1.0; ++i) {
      lo -= step;
      step *= 2.0;
    }
    hi = 0.0;
    step = 1.0;
    for (int i = 0; i < 300 && sum_at(hi) > 1.0; ++i) {
      hi += step;
      step *= 2.0;
    }
  }
  if (!(sum_at(lo) >= 1.0 && sum_at(hi) <= 1.0)) {
    throw RunFailure("mirror step: failed to bracket the dual multiplier");
  }

  double l = 0.5 * (lo + hi);
  bool converged = false;
  int iters_used = 0;
  for (int it = 0; it < kDualMaxIter; ++it) {
    iters_used = it + 1;
    double s = 0.0, ds = 0.0;
    for (const auto& c : coords) {
      const double v = coord_value(c, l);
      s += v;
      ds += coord_slope(c, v);
    }
    const double g = s - 1.0;
    if (std::abs(g) <= kDualTol) { converged = true; break; }
    if (g > 0.0) lo = l; else hi = l;
    double next = l - g / ds;
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-16 * std::max(1.0, std::abs(l))) { l = next; converged = true; break; }
    l = next;
  }
  if (!converged) throw RunFailure("mirror step: dual solve did not converge in 100 iterations");
  if (stats) {
    ++stats->calls;
    stats->iterations += iters_used;
  }

  std::vector<double> x(n);
  double s = 0.0;
  for (size_t i = 0; i < n; ++i) {
    x[i] = coord_value(coords[i], l);
    s += x[i];
  }
  for (double& v : x) v /= s;
  return x;
}

void check_simplex(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) {
    if (!(v >= 0.0)) throw std::invalid_argument("distribution has a negative coordinate");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-6) {
    throw std::invalid_argument("distribution does not sum to 1");
  }
}

}  // namespace

double SeparablePotential::max_rate() const {
  double r = 0.0;
  for (const auto& c : coords) r = std::max(r, c.rate);
  return r;
}

std::vector<double> mirror_step_simplex(std::span<const double> start,
                                        std::span<const double> loss,
                                        const SeparablePotential& potential, double step,
                                        MirrorStepStats* stats) {
  const size_t n = start.size();
  if (loss.size() != n || potential.coords.size() != n) {
    throw std::invalid_argument("mirror_step_simplex: size mismatch");
  }
  if (!(step > 0.0)) throw std::invalid_argument("mirror_step_simplex: step must be positive");
  check_simplex(start);
  for (double v : loss) {
    if (!std::isfinite(v)) throw std::invalid_argument("mirror_step_simplex: non-finite loss");
  }
  if (n == 1) return {1.0};

  std::vector<DualCoord> coords(n);
  for (size_t i = 0; i < n; ++i) {
    const auto& spec = potential.coords[i];
    if (!(spec.rate > 0.0)) throw std::invalid_argument("potential rate must be positive");
    DualCoord c{spec.kind, spec.rate, 0.0, false};
    if (start[i] <= kZeroTol) {
      c.pinned = true;
    } else if (spec.kind == PotentialKind::negative_entropy) {
      c.shift = std::log(start[i]) - spec.rate * step * loss[i];
    } else {
      c.shift = 2.0 * spec.rate * step * loss[i] + 1.0 / std::sqrt(start[i]);
    }
    coords[i] = c;
  }
  return solve_dual(coords, stats);
}

std::vector<double> mirror_step_simplex(std::span<const double> start,
                                        std::span<const double> loss, PotentialSpec potential,
                                        double step, MirrorStepStats* stats) {
  return mirror_step_simplex(start, loss,
                             SeparablePotential::uniform(potential, static_cast<int>(start.size())),
                             step, stats);
}

std::vector<double> unconstrained_step(std::span<const double> y,
                                       std::span<const double> shifted_loss,
                                       const SeparablePotential& potential) {
  const size_t n = y.size();
  if (shifted_loss.size() != n || potential.coords.size() != n) {
    throw std::invalid_argument("unconstrained_step: size mismatch");
  }
  std::vector<double> w(n);
  for (size_t i = 0; i < n; ++i) {
    const auto& spec = potential.coords[i];
    if (y[i] == 0.0) {
      w[i] = 0.0;
    } else if (spec.kind == PotentialKind::tsallis_half) {
      const double den = 2.0 * spec.rate * shifted_loss[i] * y[i] + 1.0;
      if (den <= 0.0) {
        throw RunFailure("unconstrained_step: non-positive Tsallis denominator");
      }
      w[i] = y[i] / (den * den);
    } else {
      w[i] = y[i] * std::exp(-2.0 * spec.rate * shifted_loss[i]);
    }
  }
  return w;
}

double local_norm_sq(std::span<const double> loss, std::span<const double> y,
                     const SeparablePotential& potential) {
  const size_t n = loss.size();
  if (y.size() != n || potential.coords.size() != n) {
    throw std::invalid_argument("local_norm_sq: size mismatch");
  }
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (loss[i] == 0.0) continue;
    if (y[i] <= 0.0) {
      throw std::invalid_argument("local_norm_sq: zero coordinate with nonzero loss");
    }
    const auto& spec = potential.coords[i];
    const double h = spec.kind == PotentialKind::tsallis_half
                         ? 4.0 * spec.rate * y[i] * std::sqrt(y[i])
                         : spec.rate * y[i];
    total += loss[i] * loss[i] * h;
  }
  return total;
}

std::vector<double> potential_argmin(const SeparablePotential& potential) {
  const size_t n = potential.coords.size();
  if (n == 0) throw std::invalid_argument("potential_argmin: empty potential");
  if (n == 1) return {1.0};
  bool uniform = true;
  for (const auto& c : potential.coords) {
    if (c.kind != potential.coords[0].kind || c.rate != potential.coords[0].rate) {
      uniform = false;
      break;
    }
  }
  if (uniform) return std::vector<double>(n, 1.0 / static_cast<double>(n));

  std::vector<DualCoord> coords(n);
  for (size_t i = 0; i < n; ++i) {
    const auto& spec = potential.coords[i];
    if (!(spec.rate > 0.0)) throw std::invalid_argument("potential rate must be positive");
    // Same dual form as the mirror step: negentropy minimizer exp(-1 - r l),
    // Tsallis minimizer (2 r l)^{-2}.
    coords[i] = DualCoord{spec.kind, spec.rate,
                          spec.kind == PotentialKind::negative_entropy ? -1.0 : 0.0, false};
  }
  return solve_dual(coords, nullptr);
}

}  // namespace graphbandit
