#include "landmarkbm/noise.hpp"

#include <cmath>
#include <numbers>

namespace landmarkbm {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

// 53 random bits from two words, in [0, 1).
double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi >> 5) << 26) | (lo >> 6);
  return static_cast<double>(bits) * 0x1.0p-53;
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
  }
  return ctr;
}

std::array<double, 2> NoiseStream::normal_pair(std::uint64_t path, std::uint64_t step,
                                               std::uint32_t pair) const {
  const PhiloxCounter ctr = {pair, static_cast<std::uint32_t>(step),
                             static_cast<std::uint32_t>(step >> 32),
                             static_cast<std::uint32_t>(path)};
  const PhiloxKey key = {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
  const auto words = philox4x32_10(ctr, key);
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - to_unit(words[0], words[1]);
  const double u2 = to_unit(words[2], words[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

double NoiseStream::normal(std::uint64_t path, std::uint64_t step, std::uint32_t coordinate) const {
  return normal_pair(path, step, coordinate / 2)[coordinate % 2];
}

void NoiseStream::fill(std::uint64_t path, std::uint64_t step, std::span<double> out) const {
  for (std::size_t c = 0; c < out.size(); c += 2) {
    const auto z = normal_pair(path, step, static_cast<std::uint32_t>(c / 2));
    out[c] = z[0];
    if (c + 1 < out.size()) out[c + 1] = z[1];
  }
}

}  // namespace landmarkbm
