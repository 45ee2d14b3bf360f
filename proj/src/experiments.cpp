#include "landmarkbm/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "landmarkbm/format.hpp"
#include "landmarkbm/svg.hpp"

namespace landmarkbm {
namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(',', start);
    const auto item = trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (item.empty()) throw std::invalid_argument("empty list item in '" + std::string(s) + "'");
    out.emplace_back(item);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint64_t parse_unsigned(std::string_view text) {
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || end != text.data() + text.size())
    throw std::invalid_argument("not a non-negative integer: '" + std::string(text) + "'");
  return value;
}

bool parse_bool(std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw std::invalid_argument("not a boolean: '" + std::string(text) + "'");
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ExperimentIoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw ExperimentIoError("write to '" + path.string() + "' failed");
}

ExperimentSpec make_preset(std::string name, int dim, int count) {
  ExperimentSpec spec;
  spec.name = std::move(name);
  spec.kernels = {preset_k12().spec(), preset_k32().spec(), preset_gaussian().spec()};
  spec.dim = dim;
  spec.count = count;
  spec.t_max = 1.0;
  spec.steps = 10000;
  spec.paths = 20;
  spec.seed = kShippedSeed;
  spec.resolve();
  return spec;
}

}  // namespace

void ExperimentSpec::resolve() {
  if (name.empty() || name.find_first_of("/\\") != std::string::npos)
    throw std::invalid_argument("experiment name must be a plain, nonempty file prefix");
  if (kernels.empty()) throw std::invalid_argument("experiment needs at least one kernel");
  for (const auto& k : kernels)
    if (!parse_kernel(k).has_evaluator())
      throw std::invalid_argument("kernel '" + k + "' cannot be simulated");
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (count < 2) throw std::invalid_argument("need at least two landmarks");
  if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be > 0");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (paths < 1) throw std::invalid_argument("paths must be >= 1");
  if (initial.empty()) {
    initial.assign(static_cast<std::size_t>(dim * count), 0.0);
    for (int i = 0; i < count; ++i) initial[static_cast<std::size_t>(i * dim)] = i;
  }
  if (initial.size() != static_cast<std::size_t>(dim * count))
    throw std::invalid_argument("initial configuration needs n*d values");
  if (!(min_pairwise_distance(initial_config()) > 0.0))
    throw DegenerateConfiguration("initial landmarks coincide");
}

LandmarkConfig ExperimentSpec::initial_config() const {
  return {dim, Eigen::Map<const Eigen::VectorXd>(initial.data(), static_cast<Eigen::Index>(initial.size()))};
}

std::vector<std::string> preset_names() { return {"fig1", "fig2", "fig3", "fig4", "fig5"}; }

ExperimentSpec preset(std::string_view name) {
  if (name == "fig1") return make_preset("fig1", 1, 2);
  if (name == "fig2") return make_preset("fig2", 2, 2);
  if (name == "fig3") return make_preset("fig3", 1, 3);
  if (name == "fig4") return make_preset("fig4", 1, 4);
  if (name == "fig5" || name == "fig6") return make_preset("fig5", 2, 3);
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

std::string kernel_tag(std::string_view kernel_spec) {
  const std::string canonical = parse_kernel(kernel_spec).spec();
  if (canonical == preset_k12().spec()) return "k12";
  if (canonical == preset_k32().spec()) return "k32";
  if (canonical == preset_gaussian().spec()) return "gauss";
  std::string tag = canonical;
  std::replace(tag.begin(), tag.end(), ':', '_');
  std::replace(tag.begin(), tag.end(), '.', 'p');
  return tag;
}

ExperimentSpec parse_experiment_config(std::string_view text) {
  ExperimentSpec spec;
  spec.kernels.clear();
  bool seen_key = false;
  bool initial_given = false;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? nl : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected key=value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    try {
      if (key == "preset") {
        if (seen_key) throw std::invalid_argument("preset must come before other keys");
        spec = preset(value);
      } else if (key == "name") {
        spec.name = value;
      } else if (key == "kernels") {
        spec.kernels = split_list(value);
      } else if (key == "dim") {
        spec.dim = static_cast<int>(parse_integer(value));
      } else if (key == "n") {
        spec.count = static_cast<int>(parse_integer(value));
      } else if (key == "initial") {
        spec.initial.clear();
        initial_given = true;
        for (const auto& item : split_list(value)) spec.initial.push_back(parse_double(item));
      } else if (key == "t_max") {
        spec.t_max = parse_double(value);
      } else if (key == "steps") {
        spec.steps = parse_unsigned(value);
      } else if (key == "paths") {
        spec.paths = parse_unsigned(value);
      } else if (key == "seed") {
        spec.seed = parse_unsigned(value);
      } else if (key == "eps_abs") {
        spec.thresholds.eps_abs = parse_double(value);
      } else if (key == "eps_rel") {
        spec.thresholds.eps_rel = parse_double(value);
      } else if (key == "decades") {
        spec.thresholds.decades = parse_double(value);
      } else if (key == "window") {
        spec.thresholds.window = parse_unsigned(value);
      } else if (key == "detect_crossing") {
        spec.thresholds.detect_crossing = parse_bool(value);
      } else if (key == "outdir") {
        spec.outdir = std::string(value);
      } else if (key == "emit_csv") {
        spec.emit_csv = parse_bool(value);
      } else if (key == "emit_svg") {
        spec.emit_svg = parse_bool(value);
      } else {
        throw std::invalid_argument("unknown key '" + std::string(key) + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
    }
    seen_key = true;
  }
  // a preset's unit-spacing start no longer fits once dim or n change
  if (!initial_given && spec.initial.size() != static_cast<std::size_t>(spec.dim * spec.count))
    spec.initial.clear();
  spec.resolve();
  return spec;
}

std::string format_experiment_config(const ExperimentSpec& spec) {
  std::ostringstream out;
  out << "# landmarkbm experiment, fully resolved\n";
  out << "name=" << spec.name << '\n';
  out << "kernels=";
  for (std::size_t i = 0; i < spec.kernels.size(); ++i)
    out << (i ? "," : "") << parse_kernel(spec.kernels[i]).spec();
  out << '\n';
  out << "dim=" << spec.dim << '\n';
  out << "n=" << spec.count << '\n';
  out << "initial=";
  for (std::size_t i = 0; i < spec.initial.size(); ++i)
    out << (i ? "," : "") << format_double(spec.initial[i]);
  out << '\n';
  out << "t_max=" << format_double(spec.t_max) << '\n';
  out << "steps=" << spec.steps << '\n';
  out << "paths=" << spec.paths << '\n';
  out << "seed=" << spec.seed << '\n';
  out << "eps_abs=" << format_double(spec.thresholds.eps_abs) << '\n';
  out << "eps_rel=" << format_double(spec.thresholds.eps_rel) << '\n';
  out << "decades=" << format_double(spec.thresholds.decades) << '\n';
  out << "window=" << spec.thresholds.window << '\n';
  out << "detect_crossing=" << bool_text(spec.thresholds.detect_crossing) << '\n';
  out << "outdir=" << spec.outdir.string() << '\n';
  out << "emit_csv=" << bool_text(spec.emit_csv) << '\n';
  out << "emit_svg=" << bool_text(spec.emit_svg) << '\n';
  return out.str();
}

std::vector<std::pair<KernelSummary, TrajectoryEnsemble>> simulate_experiment(
    const ExperimentSpec& spec) {
  std::vector<std::pair<KernelSummary, TrajectoryEnsemble>> out;
  for (const auto& kernel_spec : spec.kernels) {
    SimulationParams params;
    params.kernel = parse_kernel(kernel_spec);
    params.initial = spec.initial_config();
    params.t_max = spec.t_max;
    params.steps = spec.steps;
    params.paths = spec.paths;
    params.seed = spec.seed;
    params.thresholds = spec.thresholds;
    TrajectoryEnsemble ens = simulate(params);

    KernelSummary s;
    s.kernel_spec = params.kernel.spec();
    s.tag = kernel_tag(s.kernel_spec);
    s.min_distance = std::numeric_limits<double>::infinity();
    s.first_collision_step = spec.steps;
    for (const auto& path : ens.paths) {
      if (is_collision(path.stop.reason)) {
        ++s.collisions;
        s.first_collision_step = std::min(s.first_collision_step, path.stop.step);
      } else if (path.stop.reason == StopReason::NumericalFailure) {
        ++s.failures;
      } else {
        ++s.completed;
      }
      if (path.stop.min_distance < s.min_distance) {
        s.min_distance = path.stop.min_distance;
        s.extremal_path = path.path_index;
      }
      s.max_norm = std::max(s.max_norm, path.stop.max_norm);
    }
    out.emplace_back(std::move(s), std::move(ens));
  }
  return out;
}

ExperimentResult run_experiment(ExperimentSpec spec) {
  spec.resolve();
  ExperimentResult result;
  try {
    std::filesystem::create_directories(spec.outdir);
  } catch (const std::filesystem::filesystem_error& e) {
    throw ExperimentIoError("cannot create output directory '" + spec.outdir.string() + "': " +
                            e.code().message());
  }
  if (!std::filesystem::is_directory(spec.outdir))
    throw ExperimentIoError("'" + spec.outdir.string() + "' is not a directory");

  const auto write_file = [&](const std::string& file, const auto& writer) {
    const auto path = spec.outdir / file;
    auto out = open_output(path);
    writer(out);
    finish_output(out, path);
    result.files.push_back(path);
  };

  for (auto& [summary, ens] : simulate_experiment(spec)) {
    const std::string prefix = spec.name + "_" + summary.tag + "_";

    // extremal path again, with its states
    SimulationParams params;
    params.kernel = parse_kernel(summary.kernel_spec);
    params.initial = spec.initial_config();
    params.t_max = spec.t_max;
    params.steps = spec.steps;
    params.seed = spec.seed;
    params.thresholds = spec.thresholds;
    params.keep_states = true;
    TrajectoryEnsemble extremal = ens;
    extremal.paths = {simulate_path(params, summary.extremal_path)};

    if (spec.emit_csv) {
      write_file(prefix + "mindist.csv", [&](std::ostream& o) { write_min_distance_csv(o, ens); });
      write_file(prefix + "trajectory.csv",
                 [&](std::ostream& o) { write_trajectory_csv(o, extremal); });
    }
    if (spec.emit_svg) {
      PlotSpec log_plot;
      log_plot.kind = PlotKind::LogDistanceVsTime;
      log_plot.title = spec.name + " " + summary.kernel_spec + ": log10 min distance";
      log_plot.x_label = "t";
      log_plot.y_label = "log10 distance";
      log_plot.log_floor = spec.thresholds.eps_abs;
      std::vector<PlotSeries> series;
      for (const auto& path : ens.paths) {
        PlotSeries s;
        s.y = path.min_distance;
        s.x.resize(s.y.size());
        for (std::size_t k = 0; k < s.x.size(); ++k) s.x[k] = static_cast<double>(k) * ens.dt;
        s.stopped = is_collision(path.stop.reason);
        series.push_back(std::move(s));
      }
      write_file(prefix + "logdist.svg", [&](std::ostream& o) { o << emit_svg(log_plot, series); });

      PlotSpec pos_plot;
      pos_plot.kind = PlotKind::PositionVsTime;
      pos_plot.title = spec.name + " " + summary.kernel_spec + ": path " +
                       std::to_string(summary.extremal_path);
      pos_plot.x_label = spec.dim == 1 ? "position" : "first coordinate";
      pos_plot.y_label = "t";
      const auto& path = extremal.paths.front();
      series.clear();
      for (int i = 0; i < spec.count; ++i) {
        PlotSeries s;
        for (std::size_t k = 0; k < path.states.size(); ++k) {
          s.x.push_back(path.states[k][static_cast<Eigen::Index>(i * spec.dim)]);
          s.y.push_back(static_cast<double>(k) * ens.dt);
        }
        s.stopped = is_collision(path.stop.reason);
        series.push_back(std::move(s));
      }
      write_file(prefix + "positions.svg", [&](std::ostream& o) { o << emit_svg(pos_plot, series); });
    }
    result.kernels.push_back(std::move(summary));
  }

  write_file(spec.name + "_meta.txt", [&](std::ostream& o) {
    o << format_experiment_config(spec);
    for (const auto& s : result.kernels) {
      o << "# result " << s.tag << ": collisions=" << s.collisions << " failures=" << s.failures
        << " completed=" << s.completed << " min_distance=" << format_double(s.min_distance)
        << " extremal_path=" << s.extremal_path << " max_norm=" << format_double(s.max_norm)
        << '\n';
    }
  });
  result.spec = std::move(spec);
  return result;
}

}  // namespace landmarkbm
