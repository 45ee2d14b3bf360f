#include "landmarkbm/distance_sde.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "landmarkbm/format.hpp"
#include "landmarkbm/noise.hpp"
#include "landmarkbm/parallel.hpp"

namespace landmarkbm {

double sigma(const DistanceCoefficients& coeffs, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("sigma: r must be >= 0");
  return std::sqrt(2.0 * std::max(coeffs.kernel.gap(r), 0.0));
}

double drift(const DistanceCoefficients& coeffs, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("drift: r must be > 0");
  const double lambda = coeffs.kernel.lambda();
  const double k = coeffs.kernel.eval(r);
  double b = ((coeffs.dim - 1) * k - lambda) * coeffs.kernel.eval_derivative(r) / (lambda + k);
  if (coeffs.radial_term) b += (coeffs.dim - 1) * coeffs.kernel.gap(r) / r;
  return b;
}

DistancePath simulate_distance_path(const DistanceCoefficients& coeffs,
                                    const DistanceSdeParams& params, std::uint64_t path_index) {
  if (!(params.r0 > 0.0)) throw std::invalid_argument("r0 must be positive");
  if (!(params.t_max >= 0.0)) throw std::invalid_argument("t_max must be >= 0");
  if (coeffs.dim < 1) throw std::invalid_argument("dimension must be >= 1");

  const NoiseStream noise(params.seed);
  const double dt = params.dt();
  const double sqrt_dt = std::sqrt(dt);
  const double level = params.absorption_level();

  DistancePath path;
  path.r0 = params.r0;
  path.dt = dt;
  path.seed = params.seed;
  path.path_index = path_index;
  path.values.reserve(params.steps + 1);
  path.values.push_back(params.r0);

  double r = params.r0;
  for (std::size_t k = 0; k < params.steps; ++k) {
    if (path.absorbed_at) {
      path.values.push_back(0.0);
      continue;
    }
    const double next = r + drift(coeffs, r) * dt +
                        sigma(coeffs, r) * sqrt_dt * noise.normal(path_index, k, 0);
    if (!std::isfinite(next)) {
      path.failure = "non-finite distance at step " + std::to_string(k + 1) + " from r=" +
                     format_double(r);
      break;
    }
    if (next <= level) {
      path.absorbed_at = k + 1;
      path.values.push_back(0.0);
      continue;
    }
    r = next;
    path.values.push_back(r);
  }
  return path;
}

std::vector<DistancePath> simulate_distance(const DistanceCoefficients& coeffs,
                                            const DistanceSdeParams& params) {
  if (params.paths == 0) throw std::invalid_argument("need at least one path");
  std::vector<DistancePath> ensemble(params.paths);
  parallel_for(params.paths, [&](std::size_t p) {
    ensemble[p] = simulate_distance_path(coeffs, params, p);
  });
  return ensemble;
}

void write_distance_csv(std::ostream& out, const std::vector<DistancePath>& ensemble) {
  out << "path_id,step,t,r,absorbed\n";
  for (const auto& path : ensemble) {
    for (std::size_t k = 0; k < path.values.size(); ++k) {
      const bool absorbed = path.absorbed_at && k >= *path.absorbed_at;
      out << path.path_index << ',' << k << ',' << format_double(static_cast<double>(k) * path.dt)
          << ',' << format_double(path.values[k]) << ',' << (absorbed ? 1 : 0) << '\n';
    }
  }
}

}  // namespace landmarkbm
