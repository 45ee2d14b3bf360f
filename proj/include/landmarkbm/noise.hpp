#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace landmarkbm {

/// Philox4x32-10 block function (Salmon et al., SC'11).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// Standard normal draws addressed by (seed, path, step, coordinate). Any draw can
/// be regenerated in isolation, so a path's noise does not depend on which thread
/// runs it or on what other paths exist.
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  double normal(std::uint64_t path, std::uint64_t step, std::uint32_t coordinate) const;
  /// out[c] = normal(path, step, c).
  void fill(std::uint64_t path, std::uint64_t step, std::span<double> out) const;

 private:
  std::array<double, 2> normal_pair(std::uint64_t path, std::uint64_t step,
                                    std::uint32_t pair) const;
  std::uint64_t seed_;
};

}  // namespace landmarkbm
