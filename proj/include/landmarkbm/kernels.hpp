#pragma once

#include <string>
#include <string_view>

namespace landmarkbm {

/// Near-zero expansion k(0) - k(r) = D r^gamma + o(r^gamma). `has_log` marks the
/// r^2 log(r) case, which only a directly constructed record can carry.
struct AsymptoticData {
  double D = 1.0;
  double gamma = 1.0;
  bool has_log = false;
};

enum class KernelFamily { MaternHalfInteger, Gaussian, AsymptoticOnly };

/// Scalar radial profile k(r) of a translation- and rotation-invariant kernel
/// k(|x - y|) I_d.
///
/// Matérn profiles are scale * exp(-r) * P(r) with the tabulated polynomials
/// P_{1/2} = 1, P_{3/2} = 1 + r, P_{5/2} = 3 + 3r + r^2, P_{7/2} = 15 + 15r + 6r^2 + r^3.
/// The Gaussian profile is scale * exp(-r^2). An AsymptoticOnly kernel carries
/// classification data but cannot be evaluated pointwise.
class RadialKernel {
 public:
  KernelFamily family() const { return family_; }
  /// Matérn order; 0 for the other families.
  double nu() const { return nu_; }
  double scale() const { return scale_; }
  /// k(0).
  double lambda() const { return lambda_; }
  const AsymptoticData& asymptotics() const { return asymptotics_; }
  bool has_evaluator() const { return family_ != KernelFamily::AsymptoticOnly; }

  /// k(r), r >= 0.
  double eval(double r) const;
  /// Analytic k'(r), r > 0.
  double eval_derivative(double r) const;
  /// k(0) - k(r) without the cancellation of a direct subtraction, r >= 0.
  double gap(double r) const;

  /// Canonical spec string, e.g. "matern:1.5:2" or "gauss".
  std::string spec() const;

  friend RadialKernel make_matern(double nu, double scale);
  friend RadialKernel make_gaussian(double scale);
  friend RadialKernel make_asymptotic(double D, double gamma, bool has_log);

 private:
  RadialKernel() = default;
  void require_evaluator() const;

  KernelFamily family_ = KernelFamily::Gaussian;
  double nu_ = 0.0;
  int order_ = 0;  // nu - 1/2 for Matérn
  double scale_ = 1.0;
  double lambda_ = 1.0;
  AsymptoticData asymptotics_;
};

/// Half-integer Matérn profile, nu in {1/2, 3/2, 5/2, 7/2}.
RadialKernel make_matern(double nu, double scale = 1.0);
RadialKernel make_gaussian(double scale = 1.0);
/// Classification-only kernel.
RadialKernel make_asymptotic(double D, double gamma, bool has_log = false);

/// Parses `matern:<nu>[:<scale>]`, `gauss[:<scale>]` or `asymptotic:<D>:<gamma>[:log]`.
/// Dot-decimal, locale independent. Throws std::invalid_argument.
RadialKernel parse_kernel(std::string_view spec);

/// Kernels used by the figure experiments: exp(-r), 2(1+r)exp(-r), exp(-r^2).
RadialKernel preset_k12();
RadialKernel preset_k32();
RadialKernel preset_gaussian();

}  // namespace landmarkbm
