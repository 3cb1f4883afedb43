#pragma once

#include <span>
#include <vector>

namespace graphbandit {

enum class PotentialKind { negative_entropy, tsallis_half };

// One simplex coordinate of a separable potential, scaled by 1/rate:
//   negative_entropy: y log y / rate        tsallis_half: -sqrt(y) / rate.
// The learning rate of the projection instance is folded in here and the
// mirror step is then taken with step 1.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::negative_entropy;
  double rate = 1.0;
};

struct SeparablePotential {
  std::vector<PotentialSpec> coords;

  static SeparablePotential uniform(PotentialSpec spec, int dim) {
    return SeparablePotential{std::vector<PotentialSpec>(static_cast<size_t>(dim), spec)};
  }
  int dim() const { return static_cast<int>(coords.size()); }
  double max_rate() const;
};

// Dual-solve effort counters, accumulated when a stats pointer is passed.
struct MirrorStepStats {
  int64_t calls = 0;
  int64_t iterations = 0;
};

// Exact constrained mirror step on the probability simplex:
//   argmin_{x in simplex} step * <x, loss> + B_Potential(x, start).
// Zero start coordinates stay zero; negative losses are allowed; non-finite
// losses throw. Accurate to ~1e-12 per coordinate.
std::vector<double> mirror_step_simplex(std::span<const double> start,
                                        std::span<const double> loss,
                                        const SeparablePotential& potential, double step,
                                        MirrorStepStats* stats = nullptr);
std::vector<double> mirror_step_simplex(std::span<const double> start,
                                        std::span<const double> loss, PotentialSpec potential,
                                        double step, MirrorStepStats* stats = nullptr);

// Coordinate-wise closed form of the unconstrained mirror step
//   argmin_w <w, shifted_loss> + B_Potential(w, y)  over w >= 0:
//   tsallis:          W = Y / (2 rate L' Y + 1)^2
//   negative_entropy: W = Y exp(-2 rate L')
// W(i) = 0 whenever Y(i) = 0. A non-positive Tsallis denominator (violated
// step-size guard) throws.
std::vector<double> unconstrained_step(std::span<const double> y,
                                       std::span<const double> shifted_loss,
                                       const SeparablePotential& potential);

// sum_i loss(i)^2 * h_i(y(i)) with h the inverse-Hessian diagonal of the
// potential: 4 rate y^{3/2} for tsallis, rate y for negative entropy.
// Throws if some y(i) = 0 where loss(i) != 0.
double local_norm_sq(std::span<const double> loss, std::span<const double> y,
                     const SeparablePotential& potential);

// argmin of the potential over the simplex (the OSMD starting point).
std::vector<double> potential_argmin(const SeparablePotential& potential);

}  // namespace graphbandit
