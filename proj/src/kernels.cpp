#include "landmarkbm/kernels.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "landmarkbm/format.hpp"

namespace landmarkbm {
namespace {

constexpr int kMaxOrder = 3;

// P_nu for nu = order + 1/2, ascending powers.
constexpr std::array<std::array<double, 4>, 4> kProfile = {{
    {1, 0, 0, 0},
    {1, 1, 0, 0},
    {3, 3, 1, 0},
    {15, 15, 6, 1},
}};

// P - P', so that k'(r) = -scale * exp(-r) * Q(r).
constexpr std::array<std::array<double, 4>, 4> kSlope = {{
    {1, 0, 0, 0},
    {0, 1, 0, 0},
    {0, 1, 1, 0},
    {0, 3, 3, 1},
}};

double horner(const std::array<double, 4>& c, double r) {
  return ((c[3] * r + c[2]) * r + c[1]) * r + c[0];
}

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

RadialKernel make_matern(double nu, double scale) {
  require_positive(scale, "kernel scale");
  const double twice = 2.0 * nu;
  const double rounded = std::round(twice);
  if (!std::isfinite(nu) || std::abs(twice - rounded) > 1e-12 || rounded < 1.0 ||
      static_cast<long long>(rounded) % 2 == 0)
    throw std::invalid_argument("matern order must be a positive half-integer, got " +
                                format_double(nu));
  const int order = static_cast<int>((rounded - 1.0) / 2.0);
  if (order > kMaxOrder)
    throw std::invalid_argument("unsupported order " + format_double(nu) +
                                " (tabulated up to 7/2)");

  RadialKernel k;
  k.family_ = KernelFamily::MaternHalfInteger;
  k.nu_ = order + 0.5;
  k.order_ = order;
  k.scale_ = scale;
  k.lambda_ = scale * kProfile[order][0];
  if (order == 0) {
    k.asymptotics_ = {scale * kSlope[0][0], 1.0, false};
  } else {
    k.asymptotics_ = {0.5 * scale * kSlope[order][1], 2.0, false};
  }
  return k;
}

RadialKernel make_gaussian(double scale) {
  require_positive(scale, "kernel scale");
  RadialKernel k;
  k.family_ = KernelFamily::Gaussian;
  k.scale_ = scale;
  k.lambda_ = scale;
  k.asymptotics_ = {scale, 2.0, false};
  return k;
}

RadialKernel make_asymptotic(double D, double gamma, bool has_log) {
  require_positive(D, "asymptotic coefficient D");
  require_positive(gamma, "asymptotic exponent gamma");
  RadialKernel k;
  k.family_ = KernelFamily::AsymptoticOnly;
  k.scale_ = 1.0;
  k.lambda_ = 1.0;
  k.asymptotics_ = {D, gamma, has_log};
  return k;
}

RadialKernel preset_k12() { return make_matern(0.5, 1.0); }
RadialKernel preset_k32() { return make_matern(1.5, 2.0); }
RadialKernel preset_gaussian() { return make_gaussian(1.0); }

void RadialKernel::require_evaluator() const {
  if (!has_evaluator())
    throw std::logic_error("kernel '" + spec() + "' carries asymptotic data only");
}

double RadialKernel::eval(double r) const {
  require_evaluator();
  if (!(r >= 0.0)) throw std::invalid_argument("kernel argument must be >= 0");
  if (family_ == KernelFamily::Gaussian) return scale_ * std::exp(-r * r);
  return scale_ * std::exp(-r) * horner(kProfile[order_], r);
}

double RadialKernel::eval_derivative(double r) const {
  require_evaluator();
  if (!(r > 0.0)) throw std::invalid_argument("kernel derivative needs r > 0");
  if (family_ == KernelFamily::Gaussian) return -2.0 * r * scale_ * std::exp(-r * r);
  return -scale_ * std::exp(-r) * horner(kSlope[order_], r);
}

double RadialKernel::gap(double r) const {
  require_evaluator();
  if (!(r >= 0.0)) throw std::invalid_argument("kernel argument must be >= 0");
  if (family_ == KernelFamily::Gaussian) return -scale_ * std::expm1(-r * r);
  if (r == 0.0) return 0.0;
  // integral of exp(-s) Q(s) over [0, r], term by term as lower incomplete gammas
  double sum = 0.0;
  for (int j = 0; j <= kMaxOrder; ++j) {
    const double c = kSlope[order_][j];
    if (c != 0.0) sum += c * boost::math::tgamma_lower(j + 1.0, r);
  }
  return scale_ * sum;
}

std::string RadialKernel::spec() const {
  switch (family_) {
    case KernelFamily::MaternHalfInteger:
      return "matern:" + format_double(nu_) + (scale_ != 1.0 ? ":" + format_double(scale_) : "");
    case KernelFamily::Gaussian:
      return scale_ != 1.0 ? "gauss:" + format_double(scale_) : "gauss";
    case KernelFamily::AsymptoticOnly:
      return "asymptotic:" + format_double(asymptotics_.D) + ":" +
             format_double(asymptotics_.gamma) + (asymptotics_.has_log ? ":log" : "");
  }
  return {};
}

RadialKernel parse_kernel(std::string_view spec) {
  const auto parts = split(spec, ':');
  const auto bad = [&](const std::string& why) {
    return std::invalid_argument("bad kernel spec '" + std::string(spec) + "': " + why);
  };
  try {
    if (parts[0] == "matern") {
      if (parts.size() < 2 || parts.size() > 3) throw bad("expected matern:<nu>[:<scale>]");
      return make_matern(parse_double(parts[1]), parts.size() == 3 ? parse_double(parts[2]) : 1.0);
    }
    if (parts[0] == "gauss") {
      if (parts.size() > 2) throw bad("expected gauss[:<scale>]");
      return make_gaussian(parts.size() == 2 ? parse_double(parts[1]) : 1.0);
    }
    if (parts[0] == "asymptotic") {
      if (parts.size() < 3 || parts.size() > 4) throw bad("expected asymptotic:<D>:<gamma>[:log]");
      bool has_log = false;
      if (parts.size() == 4) {
        if (parts[3] != "log") throw bad("trailing field must be 'log'");
        has_log = true;
      }
      return make_asymptotic(parse_double(parts[1]), parse_double(parts[2]), has_log);
    }
  } catch (const std::invalid_argument& e) {
    if (std::string_view(e.what()).starts_with("bad kernel spec")) throw;
    throw bad(e.what());
  }
  throw bad("unknown family");
}

}  // namespace landmarkbm
