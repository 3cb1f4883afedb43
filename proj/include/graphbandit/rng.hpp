#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace graphbandit {

// Philox4x32-10 counter-based generator (Salmon et al., Random123 family).
// Draws are a pure function of (seed, stream, counter), so independent
// sub-streams never overlap and replay does not depend on call order.
class Philox {
 public:
  Philox(uint64_t seed, uint64_t stream);

  uint32_t next_u32();
  uint64_t next_u64();
  // Uniform in [0,1), 53 random bits.
  double next_double();

  // One keyed block: the raw 10-round permutation output.
  static std::array<uint32_t, 4> block(const std::array<uint32_t, 4>& counter,
                                       const std::array<uint32_t, 2>& key);

 private:
  void refill();

  std::array<uint32_t, 2> key_;
  uint64_t stream_;
  uint64_t counter_ = 0;
  std::array<uint32_t, 4> buf_{};
  int pos_ = 4;
};

// Addressed draw: the uniform [0,1) value at a fixed (seed, stream, index)
// coordinate. Used by adversaries so losses are independent of query order.
double philox_uniform_at(uint64_t seed, uint64_t stream, uint64_t index);

// Inverse-CDF sample over the fixed coordinate order. `u` uniform in [0,1).
// Leftover floating-point mass goes to the last positive coordinate.
int sample_discrete(std::span<const double> probs, double u);

}  // namespace graphbandit
