#include "landmarkbm/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "landmarkbm/format.hpp"
#include "landmarkbm/noise.hpp"
#include "landmarkbm/parallel.hpp"

namespace landmarkbm {
namespace {

bool order_changed(const LandmarkConfig& before, const LandmarkConfig& after) {
  const auto& a = before.flat();
  const auto& b = after.flat();
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = i + 1; j < a.size(); ++j)
      if ((a[i] < a[j]) != (b[i] < b[j])) return true;
  return false;
}

}  // namespace

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Completed: return "Completed";
    case StopReason::CollisionSmallDistance: return "CollisionSmallDistance";
    case StopReason::CollisionRapidDecrease: return "CollisionRapidDecrease";
    case StopReason::NumericalFailure: return "NumericalFailure";
  }
  return "?";
}

StopReason parse_stop_reason(std::string_view text) {
  for (auto r : {StopReason::Completed, StopReason::CollisionSmallDistance,
                 StopReason::CollisionRapidDecrease, StopReason::NumericalFailure})
    if (to_string(r) == text) return r;
  throw std::invalid_argument("unknown stop reason '" + std::string(text) + "'");
}

std::optional<StopReason> collision_monitor(std::span<const double> history,
                                            double initial_min_distance,
                                            const CollisionThresholds& thresholds) {
  if (history.empty()) return std::nullopt;
  const double current = history.back();
  if (current < thresholds.eps_abs || current < thresholds.eps_rel * initial_min_distance)
    return StopReason::CollisionSmallDistance;
  const std::size_t w = std::min(history.size(), std::max<std::size_t>(thresholds.window, 1));
  const auto recent = history.last(w);
  const double peak = *std::max_element(recent.begin(), recent.end());
  if (std::log10(peak) - std::log10(current) > thresholds.decades)
    return StopReason::CollisionRapidDecrease;
  return std::nullopt;
}

double min_pairwise_distance(const LandmarkConfig& config) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < config.count(); ++i)
    for (int j = i + 1; j < config.count(); ++j) best = std::min(best, config.distance(i, j));
  return best;
}

LandmarkConfig em_step(const LandmarkConfig& config, const RadialKernel& kernel, double dt,
                       std::span<const double> noise) {
  if (!(dt > 0.0)) throw std::invalid_argument("em_step: dt must be positive");
  if (static_cast<Eigen::Index>(noise.size()) != config.size())
    throw std::invalid_argument("em_step: noise length must equal n*d");
  const SymMatrix K = cometric_matrix(config, kernel);
  const Eigen::VectorXd drift = brownian_drift(config, kernel, K);
  const SymMatrix root = sqrt_psd(K);
  const Eigen::Map<const Eigen::VectorXd> xi(noise.data(), config.size());
  Eigen::VectorXd next = config.flat() + drift * dt + root.matrix() * xi * std::sqrt(dt);
  if (!next.allFinite()) throw StepFailure("Euler-Maruyama step produced a non-finite state");
  return {config.dim(), std::move(next)};
}

PathRecord simulate_path(const SimulationParams& params, std::uint64_t path_index) {
  const NoiseStream noise(params.seed);
  const double dt = params.dt();
  const auto& th = params.thresholds;

  PathRecord rec;
  rec.path_index = path_index;
  LandmarkConfig current = params.initial;
  const double initial_min = min_pairwise_distance(current);
  if (!(initial_min > 0.0)) throw DegenerateConfiguration("initial landmarks coincide");

  rec.min_distance.reserve(params.steps + 1);
  rec.min_distance.push_back(initial_min);
  if (params.keep_states) rec.states.push_back(current.flat());
  rec.stop.min_distance = initial_min;
  rec.stop.max_norm = current.flat().norm();

  std::vector<double> xi(static_cast<std::size_t>(current.size()));
  // recorded series plus the candidate state, for the monitor window
  std::vector<double> window;
  window.reserve(th.window + 1);

  for (std::size_t k = 0; k < params.steps; ++k) {
    noise.fill(path_index, k, xi);
    std::optional<LandmarkConfig> next;
    try {
      next = em_step(current, params.kernel, dt, xi);
    } catch (const std::exception& e) {
      rec.stop.reason = StopReason::NumericalFailure;
      rec.stop.step = k;
      rec.stop.diagnostic = e.what();
      return rec;
    }
    const double dist = min_pairwise_distance(*next);
    rec.stop.min_distance = std::min(rec.stop.min_distance, dist);
    rec.stop.max_norm = std::max(rec.stop.max_norm, next->flat().norm());

    std::optional<StopReason> stop;
    if (th.detect_crossing && current.dim() == 1 && order_changed(current, *next))
      stop = StopReason::CollisionSmallDistance;
    if (!stop) {
      const std::size_t keep = std::min(rec.min_distance.size(), th.window);
      window.assign(rec.min_distance.end() - static_cast<std::ptrdiff_t>(keep), rec.min_distance.end());
      window.push_back(dist);
      stop = collision_monitor(window, initial_min, th);
    }
    if (stop) {
      rec.stop.reason = *stop;
      rec.stop.step = k;
      return rec;
    }
    rec.min_distance.push_back(dist);
    if (params.keep_states) rec.states.push_back(next->flat());
    current = std::move(*next);
  }
  rec.stop.reason = StopReason::Completed;
  rec.stop.step = params.steps;
  return rec;
}

TrajectoryEnsemble simulate(const SimulationParams& params) {
  if (params.paths == 0) throw std::invalid_argument("need at least one path");
  if (!(params.t_max >= 0.0)) throw std::invalid_argument("t_max must be >= 0");
  if (!params.kernel.has_evaluator())
    throw std::invalid_argument("simulation needs a kernel with an evaluator");
  if (!(min_pairwise_distance(params.initial) > 0.0))
    throw DegenerateConfiguration("initial landmarks coincide");

  TrajectoryEnsemble ens;
  ens.kernel_spec = params.kernel.spec();
  ens.dim = params.initial.dim();
  ens.count = params.initial.count();
  ens.dt = params.dt();
  ens.steps = params.steps;
  ens.seed = params.seed;
  ens.paths.resize(params.paths);
  parallel_for(params.paths, [&](std::size_t p) { ens.paths[p] = simulate_path(params, p); });
  return ens;
}

void write_trajectory_csv(std::ostream& out, const TrajectoryEnsemble& ensemble) {
  out << "path_id,step,t";
  for (int i = 1; i <= ensemble.count; ++i)
    for (int c = 1; c <= ensemble.dim; ++c) out << ",x_" << i << '_' << c;
  out << ",min_dist,stop_reason\n";
  for (const auto& path : ensemble.paths) {
    if (path.states.size() != path.min_distance.size())
      throw std::logic_error("trajectory CSV needs full states (keep_states)");
    for (std::size_t k = 0; k < path.states.size(); ++k) {
      out << path.path_index << ',' << k << ',' << format_double(static_cast<double>(k) * ensemble.dt);
      for (double x : path.states[k]) out << ',' << format_double(x);
      out << ',' << format_double(path.min_distance[k]) << ',';
      if (k + 1 == path.states.size()) out << to_string(path.stop.reason);
      out << '\n';
    }
  }
}

void write_min_distance_csv(std::ostream& out, const TrajectoryEnsemble& ensemble) {
  out << "path_id,step,t,min_dist\n";
  for (const auto& path : ensemble.paths)
    for (std::size_t k = 0; k < path.min_distance.size(); ++k)
      out << path.path_index << ',' << k << ',' << format_double(static_cast<double>(k) * ensemble.dt)
          << ',' << format_double(path.min_distance[k]) << '\n';
}

}  // namespace landmarkbm
