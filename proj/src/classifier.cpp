#include "landmarkbm/classifier.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "landmarkbm/format.hpp"

namespace landmarkbm {
namespace {

constexpr double kQuadratureTolerance = 1e-8;
constexpr double kRefinedAlphaBand = 0.005;
// the integrability windows live in (0, 1e-3]
constexpr double kMinAnchor = 1e-3;

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2)
    throw std::invalid_argument("need 0 < r_lo < r_hi and at least two grid points");
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (points - 1));
  return grid;
}

double checked_log(const std::function<double(double)>& f, double r) {
  const double v = f(r);
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument("integrand sample at r=" + format_double(r) +
                                " is not positive and finite (" + format_double(v) + ")");
  return std::log(v);
}

Integrability verdict_from_slope(double slope, double band) {
  if (slope > -1.0 + band) return Integrability::Integrable;
  if (slope < -1.0 - band) return Integrability::Divergent;
  return Integrability::Marginal;
}

IntegrabilityTest assess(std::string name, const std::function<double(double)>& f) {
  IntegrabilityTest test;
  test.name = std::move(name);
  test.first_order = integrability_exponent(f);
  test.verdict = test.first_order.verdict;
  if (test.verdict == Integrability::Marginal) {
    test.refined = refined_integrability(f);
    test.verdict = test.refined->verdict;
  }
  return test;
}

}  // namespace

std::string_view to_string(SingularityKind kind) {
  switch (kind) {
    case SingularityKind::Regular: return "Regular";
    case SingularityKind::Type1: return "Type1";
    case SingularityKind::Type2: return "Type2";
    case SingularityKind::Type4: return "Type4";
    case SingularityKind::Type5: return "Type5";
  }
  return "?";
}

std::string_view to_string(Integrability verdict) {
  switch (verdict) {
    case Integrability::Integrable: return "integrable";
    case Integrability::Divergent: return "divergent";
    case Integrability::Marginal: return "marginal";
  }
  return "?";
}

SingularityClassification make_classification(SingularityKind kind) {
  SingularityClassification c;
  c.kind = kind;
  c.collision_possible = kind == SingularityKind::Regular || kind == SingularityKind::Type1 ||
                         kind == SingularityKind::Type2;
  c.brownian_complete = !c.collision_possible;
  switch (kind) {
    case SingularityKind::Regular:
    case SingularityKind::Type1:
      c.notes = {"E[T_{0,a}] < ∞", "P(r_{T_{0,a}} = 0) > 0"};
      break;
    case SingularityKind::Type2:
      c.notes = {"E[T_a] < ∞", "P(r_t = 0 for some t ≤ T_a) > 0"};
      break;
    case SingularityKind::Type4:
      c.notes = {"r_t > 0 for all t", "P(T_a = ∞) > 0", "r_t → 0 a.s. on {T_a = ∞}"};
      break;
    case SingularityKind::Type5:
      c.notes = {"r_t > 0 for all t", "T_a < ∞ a.s."};
      break;
  }
  return c;
}

SingularityClassification classify(double gamma, bool has_log, int dim) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be positive");
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  SingularityKind kind;
  if (gamma < 1.0) {
    kind = SingularityKind::Regular;
  } else if (gamma < 2.0) {
    kind = dim == 1 ? SingularityKind::Type2 : SingularityKind::Type1;
  } else {
    kind = dim == 1 ? SingularityKind::Type5 : SingularityKind::Type4;
  }
  auto c = make_classification(kind);
  if (has_log) c.notes.emplace_back("r^2 log(r) asymptotics, treated as gamma = 2");
  return c;
}

RhoFunction::RhoFunction(RadialKernel kernel, int dim, double anchor)
    : kernel_(std::move(kernel)), dim_(dim), anchor_(anchor) {
  if (!kernel_.has_evaluator()) throw std::invalid_argument("rho needs a kernel with an evaluator");
  if (dim_ < 1) throw std::invalid_argument("dimension must be >= 1");
  if (!(anchor_ > 0.0) || !std::isfinite(anchor_)) throw std::invalid_argument("anchor must be positive");
  gap_anchor_ = kernel_.gap(anchor_);
  sum_anchor_ = kernel_.lambda() + kernel_.eval(anchor_);
}

double RhoFunction::operator()(double r) const {
  if (!(r > 0.0) || r > anchor_)
    throw std::invalid_argument("rho is defined on (0, a], got r=" + format_double(r));
  const double half_d = 0.5 * dim_;
  const double gap_ratio = gap_anchor_ / kernel_.gap(r);
  const double sum_ratio = sum_anchor_ / (kernel_.lambda() + kernel_.eval(r));
  return std::pow(gap_ratio, 1.0 - half_d) * std::pow(sum_ratio, -half_d);
}

double rho(const RhoFunction& rho_fn, double r) { return rho_fn(r); }

ExponentEstimate integrability_exponent(const std::function<double(double)>& f, double r_lo,
                                        double r_hi, int points) {
  const auto grid = log_grid(r_lo, r_hi, points);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double r : grid) {
    const double x = std::log(r);
    const double y = checked_log(f, r);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(grid.size());
  ExponentEstimate est;
  est.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  est.verdict = verdict_from_slope(est.slope, kMarginalBand);
  return est;
}

RefinedEstimate refined_integrability(const std::function<double(double)>& f, double r_lo,
                                      double r_hi, int points) {
  if (!(r_hi < 1.0)) throw std::invalid_argument("refined window must lie below r = 1");
  const auto grid = log_grid(r_lo, r_hi, points);
  Eigen::MatrixXd design(points, 3);
  Eigen::VectorXd rhs(points);
  for (int i = 0; i < points; ++i) {
    const double r = grid[static_cast<std::size_t>(i)];
    design(i, 0) = std::log(r);
    design(i, 1) = std::log(-std::log(r));
    design(i, 2) = 1.0;
    rhs[i] = checked_log(f, r);
  }
  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs);
  RefinedEstimate est;
  est.alpha = coef[0];
  est.beta = coef[1];
  if (std::abs(est.alpha + 1.0) > kRefinedAlphaBand) {
    est.verdict = est.alpha > -1.0 ? Integrability::Integrable : Integrability::Divergent;
  } else if (est.beta < -1.0 - kMarginalBand) {
    est.verdict = Integrability::Integrable;
  } else if (est.beta > -1.0 + kMarginalBand) {
    est.verdict = Integrability::Divergent;
  } else {
    est.verdict = Integrability::Marginal;
  }
  return est;
}

ScaleFunction::ScaleFunction(RhoFunction rho_fn) : rho_(std::move(rho_fn)) {
  if (rho_.anchor() < kMinAnchor)
    throw std::invalid_argument("anchor must be at least 1e-3 to contain the test windows");
  const auto test = assess("rho", [this](double r) { return rho_(r); });
  if (test.verdict == Integrability::Marginal)
    throw std::runtime_error("cannot decide integrability of rho at zero");
  from_zero_ = test.verdict == Integrability::Integrable;
}

double ScaleFunction::operator()(double r) const {
  const double a = rho_.anchor();
  if (!(r > 0.0) || r > a) throw std::invalid_argument("s is defined on (0, a], got r=" + format_double(r));
  double error = 0.0;
  double l1 = 0.0;
  double value = 0.0;
  if (from_zero_) {
    // int_0^r rho(y) dy with y = r e^{-u}
    const auto integrand = [&](double u) {
      const double y = r * std::exp(-u);
      return y > 0.0 ? rho_(y) * y : 0.0;
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    value = integrator.integrate(integrand, 0.0, std::numeric_limits<double>::infinity(), 1e-12,
                                 &error, &l1);
  } else {
    if (r == a) return 0.0;
    // -int_r^a rho(y) dy with y = e^t
    const auto integrand = [&](double t) {
      const double y = std::min(std::exp(t), a);
      return rho_(y) * y;
    };
    value = -boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, std::log(r), std::log(a), 20, 1e-12, &error, &l1);
  }
  if (!std::isfinite(value) || error > kQuadratureTolerance * std::abs(value))
    throw QuadratureFailure("quadrature for s(" + format_double(r) + ") did not converge (error " +
                            format_double(error) + ")");
  return value;
}

double s_function(const RhoFunction& rho_fn, double r) { return ScaleFunction(rho_fn)(r); }

NumericalClassification classify_numerically(const RadialKernel& kernel, int dim, double anchor) {
  if (!kernel.has_evaluator())
    throw std::invalid_argument("numerical classification needs a kernel with an evaluator");
  if (!(anchor >= kMinAnchor) || anchor > 1.0) throw std::invalid_argument("anchor must lie in [1e-3, 1]");

  const DistanceCoefficients coeffs{kernel, dim};
  const RhoFunction rho_fn(kernel, dim, anchor);
  const auto sigma2 = [&](double r) { return 2.0 * kernel.gap(r); };
  const auto abs_b = [&](double r) { return std::abs(drift(coeffs, r)); };

  NumericalClassification out;
  const auto finish = [&](std::optional<SingularityKind> kind) {
    if (kind) {
      out.classification = make_classification(*kind);
    } else {
      out.inconclusive = true;
    }
    return out;
  };
  const auto record = [&](std::string name, const std::function<double(double)>& f) {
    out.tests.push_back(assess(std::move(name), f));
    return out.tests.back().verdict;
  };

  const auto t_coeff = record("(1+|b|)/sigma^2", [&](double r) { return (1.0 + abs_b(r)) / sigma2(r); });
  if (t_coeff == Integrability::Marginal) return finish(std::nullopt);
  if (t_coeff == Integrability::Integrable) return finish(SingularityKind::Regular);

  const auto t_rho = record("rho", [&](double r) { return rho_fn(r); });
  if (t_rho == Integrability::Marginal) return finish(std::nullopt);
  const bool rho_integrable = t_rho == Integrability::Integrable;

  const auto t_inv = record("(1+|b|)/(rho sigma^2)",
                            [&](double r) { return (1.0 + abs_b(r)) / (rho_fn(r) * sigma2(r)); });
  if (t_inv == Integrability::Marginal) return finish(std::nullopt);

  if (t_inv == Integrability::Integrable) {
    const auto t_drift = record("|b|/sigma^2", [&](double r) { return abs_b(r) / sigma2(r); });
    if (t_drift == Integrability::Divergent) return finish(SingularityKind::Type2);
    // an integrable |b|/sigma^2 here would be type 3
    assert(t_drift != Integrability::Integrable);
    return finish(std::nullopt);
  }

  const ScaleFunction s(rho_fn);
  const auto t_scale = record("(1+|b|)|s|/(rho sigma^2)", [&](double r) {
    return (1.0 + abs_b(r)) * std::abs(s(r)) / (rho_fn(r) * sigma2(r));
  });
  if (t_scale == Integrability::Marginal) return finish(std::nullopt);
  if (t_scale == Integrability::Integrable) {
    if (rho_integrable) return finish(SingularityKind::Type1);
    assert(false && "integrable scale test with non-integrable rho");
    return finish(std::nullopt);
  }
  if (!rho_integrable) return finish(SingularityKind::Type5);

  const auto t_tail = record("|s|/(rho sigma^2)",
                             [&](double r) { return std::abs(s(r)) / (rho_fn(r) * sigma2(r)); });
  if (t_tail == Integrability::Divergent) return finish(SingularityKind::Type4);
  assert(t_tail != Integrability::Integrable);
  return finish(std::nullopt);
}

}  // namespace landmarkbm
