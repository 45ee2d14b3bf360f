#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "landmarkbm/simulator.hpp"

namespace landmarkbm {

/// Master seed used by the presets.
inline constexpr std::uint64_t kShippedSeed = 0;

/// A file could not be created or written. The message names the path.
class ExperimentIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Figure-style experiment: every kernel is run on the same initial configuration
/// with the same master seed.
struct ExperimentSpec {
  /// Prefix of every output file.
  std::string name = "experiment";
  std::vector<std::string> kernels;
  int dim = 1;
  int count = 2;
  /// Flat landmark-major initial state; empty means unit spacing on the first axis.
  std::vector<double> initial;
  double t_max = 1.0;
  std::size_t steps = 10000;
  std::size_t paths = 20;
  std::uint64_t seed = kShippedSeed;
  CollisionThresholds thresholds;
  std::filesystem::path outdir = ".";
  bool emit_csv = true;
  bool emit_svg = true;

  /// Fills `initial` when empty and checks the invariants. Throws
  /// std::invalid_argument.
  void resolve();
  /// Initial configuration after resolution.
  LandmarkConfig initial_config() const;
};

/// Names accepted by preset(): fig1 .. fig5. fig5 also covers the d = 2, n = 3
/// setting of the sixth figure.
std::vector<std::string> preset_names();
ExperimentSpec preset(std::string_view name);

/// Short file tag for a kernel: k12, k32 and gauss for the presets, otherwise the
/// spec with ':' and '.' replaced.
std::string kernel_tag(std::string_view kernel_spec);

/// key=value lines with '#' comments. A `preset` key starts from that preset;
/// later keys override. Unknown keys and malformed values throw
/// std::invalid_argument.
ExperimentSpec parse_experiment_config(std::string_view text);
/// Fully resolved spec in the format parse_experiment_config reads.
std::string format_experiment_config(const ExperimentSpec& spec);

struct KernelSummary {
  std::string tag;
  std::string kernel_spec;
  std::size_t collisions = 0;
  std::size_t failures = 0;
  std::size_t completed = 0;
  /// Smallest distance over all paths and the path that attained it.
  double min_distance = 0.0;
  std::uint64_t extremal_path = 0;
  /// Largest configuration norm over all paths.
  double max_norm = 0.0;
  /// Earliest stop step among Collision* paths, `steps` if none.
  std::size_t first_collision_step = 0;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<KernelSummary> kernels;
  /// Every file written, in write order.
  std::vector<std::filesystem::path> files;
};

/// Runs every kernel of the spec and writes, per kernel tag,
/// <name>_<tag>_mindist.csv, <name>_<tag>_trajectory.csv (the extremal path),
/// <name>_<tag>_logdist.svg and <name>_<tag>_positions.svg, then <name>_meta.txt.
/// The output directory is created if needed. Throws ExperimentIoError.
ExperimentResult run_experiment(ExperimentSpec spec);

/// Runs the simulations only; no files are touched.
std::vector<std::pair<KernelSummary, TrajectoryEnsemble>> simulate_experiment(
    const ExperimentSpec& spec);

}  // namespace landmarkbm
