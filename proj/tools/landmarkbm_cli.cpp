#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "landmarkbm/classifier.hpp"
#include "landmarkbm/distance_sde.hpp"
#include "landmarkbm/experiments.hpp"
#include "landmarkbm/format.hpp"
#include "landmarkbm/simulator.hpp"

namespace lbm = landmarkbm;

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

const char* bool_text(bool b) { return b ? "true" : "false"; }

// "-" or empty means stdout
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw lbm::ExperimentIoError("cannot open '" + path + "' for writing");
    path_ = path;
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close() {
    stream().flush();
    if (!stream()) throw lbm::ExperimentIoError("write to '" + (path_.empty() ? "stdout" : path_) + "' failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::string path_;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(lbm::parse_double(item));
  return out;
}

struct Common {
  std::string kernel = "gauss";
  int dim = 1;
  std::uint64_t seed = lbm::kShippedSeed;
  std::string out = "-";
};

int run_classify(const Common& c, bool json) {
  const auto kernel = lbm::parse_kernel(c.kernel);
  const auto& a = kernel.asymptotics();
  const auto cls = lbm::classify(a, c.dim);
  std::cout << "kernel=" << kernel.spec() << " d=" << c.dim << " gamma=" << lbm::format_double(a.gamma)
            << " kind=" << lbm::to_string(cls.kind) << " collision=" << bool_text(cls.collision_possible)
            << " complete=" << bool_text(cls.brownian_complete) << '\n';
  if (json) {
    nlohmann::ordered_json j;
    j["kernel"] = kernel.spec();
    j["d"] = c.dim;
    j["gamma"] = a.gamma;
    j["has_log"] = a.has_log;
    j["D"] = a.D;
    j["kind"] = std::string(lbm::to_string(cls.kind));
    j["collision_possible"] = cls.collision_possible;
    j["brownian_complete"] = cls.brownian_complete;
    j["notes"] = cls.notes;
    std::cout << j.dump(2) << '\n';
  }
  return 0;
}

int run_verify(const Common& c, double anchor, bool verbose) {
  const auto kernel = lbm::parse_kernel(c.kernel);
  const auto analytic = lbm::classify(kernel.asymptotics(), c.dim);
  const auto numeric = lbm::classify_numerically(kernel, c.dim, anchor);
  if (verbose) {
    for (const auto& t : numeric.tests) {
      std::cout << "  " << t.name << ": slope=" << lbm::format_double(t.first_order.slope);
      if (t.refined)
        std::cout << " alpha=" << lbm::format_double(t.refined->alpha)
                  << " beta=" << lbm::format_double(t.refined->beta);
      std::cout << " -> " << lbm::to_string(t.verdict) << '\n';
    }
  }
  std::cout << "kernel=" << kernel.spec() << " d=" << c.dim << " analytic=" << lbm::to_string(analytic.kind)
            << " numerical=";
  if (numeric.inconclusive || !numeric.classification) {
    std::cout << "inconclusive agree=false\n";
    return kExitDomain;
  }
  const bool agree = numeric.classification->kind == analytic.kind;
  std::cout << lbm::to_string(numeric.classification->kind) << " agree=" << bool_text(agree) << '\n';
  return agree ? 0 : kExitDomain;
}

struct SimulateOpts {
  int count = 2;
  std::string initial;
  double t_max = 1.0;
  std::size_t steps = 10000;
  std::size_t paths = 1;
  bool states = false;
  lbm::CollisionThresholds thresholds;
};

int run_simulate(const Common& c, const SimulateOpts& o) {
  lbm::ExperimentSpec spec;
  spec.name = "simulate";
  spec.kernels = {c.kernel};
  spec.dim = c.dim;
  spec.count = o.count;
  if (!o.initial.empty()) spec.initial = parse_list(o.initial);
  spec.t_max = o.t_max;
  spec.steps = o.steps;
  spec.paths = o.paths;
  spec.resolve();

  lbm::SimulationParams params;
  params.kernel = lbm::parse_kernel(c.kernel);
  params.initial = spec.initial_config();
  params.t_max = o.t_max;
  params.steps = o.steps;
  params.paths = o.paths;
  params.seed = c.seed;
  params.thresholds = o.thresholds;
  params.keep_states = o.states;
  const auto ens = lbm::simulate(params);

  Sink sink(c.out);
  if (o.states)
    lbm::write_trajectory_csv(sink.stream(), ens);
  else
    lbm::write_min_distance_csv(sink.stream(), ens);
  sink.close();
  std::size_t collisions = 0, failures = 0;
  for (const auto& p : ens.paths) {
    collisions += lbm::is_collision(p.stop.reason);
    failures += p.stop.reason == lbm::StopReason::NumericalFailure;
  }
  std::cerr << "kernel=" << ens.kernel_spec << " paths=" << ens.paths.size() << " collisions=" << collisions
            << " failures=" << failures << '\n';
  return 0;
}

struct DistanceOpts {
  double r0 = 1.0;
  double t_max = 1.0;
  std::size_t steps = 10000;
  std::size_t paths = 1;
  std::optional<double> absorb_eps;
  bool radial_term = false;
};

int run_distance(const Common& c, const DistanceOpts& o) {
  lbm::DistanceCoefficients coeffs{lbm::parse_kernel(c.kernel), c.dim, o.radial_term};
  if (coeffs.dim < 1) throw std::invalid_argument("dim must be >= 1");
  lbm::DistanceSdeParams params;
  params.r0 = o.r0;
  params.t_max = o.t_max;
  params.steps = o.steps;
  params.paths = o.paths;
  params.seed = c.seed;
  params.absorb_eps = o.absorb_eps;
  if (params.paths < 1) throw std::invalid_argument("paths must be >= 1");
  const auto ens = lbm::simulate_distance(coeffs, params);
  Sink sink(c.out);
  lbm::write_distance_csv(sink.stream(), ens);
  sink.close();
  std::size_t absorbed = 0;
  for (const auto& p : ens) absorbed += p.absorbed_at.has_value();
  std::cerr << "kernel=" << coeffs.kernel.spec() << " d=" << c.dim << " paths=" << ens.size()
            << " absorbed=" << absorbed << '\n';
  return 0;
}

struct ExperimentOpts {
  std::string preset;
  std::string config;
  std::string outdir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::optional<std::size_t> steps;
  bool no_csv = false;
  bool no_svg = false;
};

int run_experiment_cmd(const ExperimentOpts& o) {
  lbm::ExperimentSpec spec;
  if (!o.config.empty()) {
    std::ifstream in(o.config, std::ios::binary);
    if (!in) throw lbm::ExperimentIoError("cannot read config '" + o.config + "'");
    std::stringstream text;
    text << in.rdbuf();
    spec = lbm::parse_experiment_config(text.str());
  } else {
    spec = lbm::preset(o.preset);
  }
  if (!o.outdir.empty()) spec.outdir = o.outdir;
  if (o.seed) spec.seed = *o.seed;
  if (o.paths) spec.paths = *o.paths;
  if (o.steps) spec.steps = *o.steps;
  if (o.no_csv) spec.emit_csv = false;
  if (o.no_svg) spec.emit_svg = false;
  const auto result = lbm::run_experiment(spec);
  for (const auto& k : result.kernels) {
    std::cout << result.spec.name << ' ' << k.tag << " collisions=" << k.collisions << '/'
              << result.spec.paths << " failures=" << k.failures
              << " min_distance=" << lbm::format_double(k.min_distance)
              << " max_norm=" << lbm::format_double(k.max_norm) << '\n';
  }
  for (const auto& f : result.files) std::cout << "wrote " << f.string() << '\n';
  return 0;
}

void add_common(CLI::App* sub, Common& c, bool with_out) {
  sub->add_option("--kernel,-k", c.kernel, "matern:<nu>[:<scale>], gauss[:<scale>] or asymptotic:<D>:<gamma>[:log]")
      ->capture_default_str();
  sub->add_option("--dim,-d", c.dim, "Ambient dimension")->capture_default_str();
  sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  if (with_out) sub->add_option("--out,-o", c.out, "Output CSV ('-' for stdout)")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Brownian motion on kernel landmark spaces"};
  app.require_subcommand(1);

  Common common;

  auto* classify = app.add_subcommand("classify", "Closed-form singularity type of the distance process at 0");
  add_common(classify, common, false);
  bool json = false;
  classify->add_flag("--json", json, "Also print a JSON detail block");

  auto* verify = app.add_subcommand("verify", "Numerical classification compared with the closed form");
  add_common(verify, common, false);
  double anchor = 1.0;
  bool verbose = false;
  verify->add_option("--anchor", anchor, "Anchor point a of the scale function")->capture_default_str();
  verify->add_flag("--verbose,-v", verbose, "Print every integrability test");

  auto* simulate = app.add_subcommand("simulate", "Euler-Maruyama landmark Brownian motion");
  add_common(simulate, common, true);
  SimulateOpts sim;
  simulate->add_option("--n,-n", sim.count, "Number of landmarks")->capture_default_str();
  simulate->add_option("--initial", sim.initial, "Comma-separated flat initial state (default unit spacing)");
  simulate->add_option("--t-max", sim.t_max)->capture_default_str();
  simulate->add_option("--steps", sim.steps)->capture_default_str();
  simulate->add_option("--paths", sim.paths)->capture_default_str();
  simulate->add_option("--eps-abs", sim.thresholds.eps_abs)->capture_default_str();
  simulate->add_option("--eps-rel", sim.thresholds.eps_rel)->capture_default_str();
  simulate->add_option("--decades", sim.thresholds.decades)->capture_default_str();
  simulate->add_option("--window", sim.thresholds.window)->capture_default_str();
  simulate->add_flag("--states", sim.states, "Write full trajectories instead of minimum distances");

  auto* distance = app.add_subcommand("distance-sde", "Two-landmark distance SDE");
  add_common(distance, common, true);
  DistanceOpts dist;
  distance->add_option("--r0", dist.r0)->capture_default_str();
  distance->add_option("--t-max", dist.t_max)->capture_default_str();
  distance->add_option("--steps", dist.steps)->capture_default_str();
  distance->add_option("--paths", dist.paths)->capture_default_str();
  distance->add_option("--absorb-eps", dist.absorb_eps, "Absorption level (default 1e-8 r0)");
  distance->add_flag("--radial-term", dist.radial_term, "Include the (d-1)(lambda-k)/r drift term");

  auto* experiment = app.add_subcommand(
      "experiment",
      "Figure experiments. Presets fig1 (d=1,n=2), fig2 (d=2,n=2), fig3 (d=1,n=3), fig4 (d=1,n=4), "
      "fig5 (d=2,n=3; also the sixth figure)");
  ExperimentOpts exp;
  auto* preset_opt = experiment->add_option("--preset", exp.preset, "fig1 .. fig5");
  auto* config_opt = experiment->add_option("--config", exp.config, "key=value experiment file");
  preset_opt->excludes(config_opt);
  experiment->add_option("--outdir,--out,-o", exp.outdir, "Output directory");
  experiment->add_option("--seed", exp.seed, "Override the master seed");
  experiment->add_option("--paths", exp.paths, "Override the path count");
  experiment->add_option("--steps", exp.steps, "Override the step count");
  experiment->add_flag("--no-csv", exp.no_csv);
  experiment->add_flag("--no-svg", exp.no_svg);

  try {
    app.parse(argc, argv);
    if (experiment->parsed() && exp.preset.empty() && exp.config.empty())
      throw CLI::RequiredError("--preset or --config");
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (classify->parsed()) return run_classify(common, json);
    if (verify->parsed()) return run_verify(common, anchor, verbose);
    if (simulate->parsed()) return run_simulate(common, sim);
    if (distance->parsed()) return run_distance(common, dist);
    if (experiment->parsed()) return run_experiment_cmd(exp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}
