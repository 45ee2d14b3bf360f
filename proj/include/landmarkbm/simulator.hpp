#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "landmarkbm/geometry.hpp"
#include "landmarkbm/kernels.hpp"

namespace landmarkbm {

enum class StopReason { Completed, CollisionSmallDistance, CollisionRapidDecrease, NumericalFailure };

std::string_view to_string(StopReason reason);
StopReason parse_stop_reason(std::string_view text);
inline bool is_collision(StopReason reason) {
  return reason == StopReason::CollisionSmallDistance || reason == StopReason::CollisionRapidDecrease;
}

/// `step` is the index of the last recorded state: `steps` for completed paths,
/// otherwise the state just before the one that tripped the stop. The extrema
/// include the tripping state.
struct StopRecord {
  StopReason reason = StopReason::Completed;
  std::size_t step = 0;
  double min_distance = 0.0;
  double max_norm = 0.0;
  std::string diagnostic;
};

/// An Euler-Maruyama step produced a non-finite configuration.
class StepFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CollisionThresholds {
  double eps_abs = 1e-8;
  /// Relative to the initial minimum distance.
  double eps_rel = 1e-6;
  /// Decades of decrease of the minimum distance...
  double decades = 3.0;
  /// ...within this many steps.
  std::size_t window = 10;
  /// In d = 1 landmarks cannot pass each other without colliding; a change of
  /// their order between two states is reported as CollisionSmallDistance.
  bool detect_crossing = true;
};

/// Evaluates the stop rule on the most recent minimum distances; `history.back()`
/// is the newest value and at most `window` values are looked at.
std::optional<StopReason> collision_monitor(std::span<const double> history,
                                            double initial_min_distance,
                                            const CollisionThresholds& thresholds);

double min_pairwise_distance(const LandmarkConfig& config);

/// q' = q - 1/2 sum K^{lm} Gamma_{lm} dt + sqrt(K(q)) sqrt(dt) noise.
LandmarkConfig em_step(const LandmarkConfig& config, const RadialKernel& kernel, double dt,
                       std::span<const double> noise);

struct SimulationParams {
  RadialKernel kernel = preset_gaussian();
  LandmarkConfig initial = LandmarkConfig(1, Eigen::Vector2d(0.0, 1.0));
  double t_max = 1.0;
  std::size_t steps = 10000;
  std::size_t paths = 1;
  std::uint64_t seed = 0;
  CollisionThresholds thresholds;
  /// Keep every state, not only the minimum-distance series.
  bool keep_states = false;

  double dt() const { return steps == 0 ? 0.0 : t_max / static_cast<double>(steps); }
};

struct PathRecord {
  std::uint64_t path_index = 0;
  /// One entry per recorded state, index 0 being the initial configuration.
  std::vector<double> min_distance;
  /// Flat states, filled only when keep_states was set.
  std::vector<Eigen::VectorXd> states;
  StopRecord stop;
};

struct TrajectoryEnsemble {
  std::string kernel_spec;
  int dim = 1;
  int count = 2;
  double dt = 0.0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  std::vector<PathRecord> paths;
};

/// Noise for step k of path p is NoiseStream(seed).fill(p, k, ...), one draw per
/// flat coordinate.
PathRecord simulate_path(const SimulationParams& params, std::uint64_t path_index);

/// Paths run in parallel; the result does not depend on the worker count.
TrajectoryEnsemble simulate(const SimulationParams& params);

/// Columns path_id,step,t,x_1_1..x_n_d,min_dist,stop_reason; the reason is filled on
/// each path's final row. Needs keep_states.
void write_trajectory_csv(std::ostream& out, const TrajectoryEnsemble& ensemble);

/// Columns path_id,step,t,min_dist.
void write_min_distance_csv(std::ostream& out, const TrajectoryEnsemble& ensemble);

}  // namespace landmarkbm
