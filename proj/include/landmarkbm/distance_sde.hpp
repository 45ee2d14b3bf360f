#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "landmarkbm/kernels.hpp"

namespace landmarkbm {

/// Coefficients of dr = sigma(r) dB + b(r) dt, the distance between two landmarks
/// in R^d under landmark Brownian motion.
struct DistanceCoefficients {
  RadialKernel kernel;
  int dim = 1;
  /// Adds (d - 1)(lambda - k(r)) / r to the drift: the Ito term that the radial
  /// projection of the full landmark motion carries for d >= 2. Off by default.
  bool radial_term = false;
};

/// sqrt(2 (lambda - k(r))), with the gap clamped at zero.
double sigma(const DistanceCoefficients& coeffs, double r);

/// ((d - 1) k(r) - lambda) k'(r) / (lambda + k(r)), r > 0, plus the radial term if set.
double drift(const DistanceCoefficients& coeffs, double r);

struct DistancePath {
  double r0 = 1.0;
  double dt = 0.0;
  std::vector<double> values;
  /// Step at which the path crossed the absorption level; values are 0 from there on.
  std::optional<std::size_t> absorbed_at;
  std::uint64_t seed = 0;
  std::uint64_t path_index = 0;
  /// Set when the state went non-finite; values stop at the last finite state.
  std::optional<std::string> failure;
};

struct DistanceSdeParams {
  double r0 = 1.0;
  double t_max = 1.0;
  std::size_t steps = 10000;
  std::uint64_t seed = 0;
  std::size_t paths = 1;
  /// Defaults to 1e-8 * r0.
  std::optional<double> absorb_eps;

  double dt() const { return steps == 0 ? 0.0 : t_max / static_cast<double>(steps); }
  double absorption_level() const { return absorb_eps.value_or(1e-8 * r0); }
};

/// Euler-Maruyama, r_{k+1} = r_k + b(r_k) dt + sigma(r_k) sqrt(dt) xi_k. A step
/// landing at or below the absorption level (negative values included) absorbs.
/// Noise for step k of path p is NoiseStream(seed).normal(p, k, 0).
DistancePath simulate_distance_path(const DistanceCoefficients& coeffs,
                                    const DistanceSdeParams& params, std::uint64_t path_index);

std::vector<DistancePath> simulate_distance(const DistanceCoefficients& coeffs,
                                            const DistanceSdeParams& params);

/// Columns path_id,step,t,r,absorbed.
void write_distance_csv(std::ostream& out, const std::vector<DistancePath>& ensemble);

}  // namespace landmarkbm
