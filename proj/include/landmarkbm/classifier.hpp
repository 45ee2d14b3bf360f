#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "landmarkbm/distance_sde.hpp"
#include "landmarkbm/kernels.hpp"

namespace landmarkbm {

/// Cherny-Engelbert type of the zero boundary of the distance SDE. Type 3 never
/// arises for these coefficients and has no enumerator.
enum class SingularityKind { Regular, Type1, Type2, Type4, Type5 };

std::string_view to_string(SingularityKind kind);

struct SingularityClassification {
  SingularityKind kind = SingularityKind::Regular;
  bool collision_possible = true;
  /// Brownian completeness of the two-landmark space; escape to infinity cannot
  /// precede collision, so this is exactly !collision_possible.
  bool brownian_complete = false;
  std::vector<std::string> notes;
};

SingularityClassification make_classification(SingularityKind kind);

/// Closed-form classification from the near-zero exponent of k(0) - k(r). A
/// logarithmic factor at gamma = 2 behaves like gamma = 2.
SingularityClassification classify(double gamma, bool has_log, int dim);
inline SingularityClassification classify(const AsymptoticData& data, int dim) {
  return classify(data.gamma, data.has_log, dim);
}

/// rho(r) = exp(int_r^a 2b/sigma^2), in the closed form obtained by substituting z = k(y):
/// ((lambda - k(a)) / (lambda - k(r)))^{1 - d/2} ((lambda + k(a)) / (lambda + k(r)))^{-d/2}.
class RhoFunction {
 public:
  RhoFunction(RadialKernel kernel, int dim, double anchor = 1.0);

  double operator()(double r) const;
  const RadialKernel& kernel() const { return kernel_; }
  int dim() const { return dim_; }
  double anchor() const { return anchor_; }

 private:
  RadialKernel kernel_;
  int dim_;
  double anchor_;
  double gap_anchor_;
  double sum_anchor_;
};

double rho(const RhoFunction& rho_fn, double r);

class QuadratureFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Integrability { Integrable, Divergent, Marginal };
std::string_view to_string(Integrability verdict);

struct ExponentEstimate {
  double slope = 0.0;
  Integrability verdict = Integrability::Marginal;
};

inline constexpr double kMarginalBand = 0.05;

/// Least-squares slope of log f against log r on a log-uniform grid. A slope above
/// -1 + band means integrable at zero, below -1 - band divergent, otherwise marginal.
ExponentEstimate integrability_exponent(const std::function<double(double)>& f,
                                        double r_lo = 1e-5, double r_hi = 1e-3,
                                        int points = 50);

/// Second-order test for the marginal band: fits log f = alpha log r +
/// beta log|log r| + c over [1e-60, 1e-4]. alpha decides when it is clearly off -1
/// (by more than 0.005); otherwise f ~ r^{-1} |log r|^{beta} is integrable iff beta < -1.
struct RefinedEstimate {
  double alpha = 0.0;
  double beta = 0.0;
  Integrability verdict = Integrability::Marginal;
};
RefinedEstimate refined_integrability(const std::function<double(double)>& f,
                                      double r_lo = 1e-60, double r_hi = 1e-4, int points = 120);

/// s(r) = int_0^r rho when rho is integrable at zero, int_a^r rho otherwise. The
/// branch is fixed at construction by the integrability test on rho.
class ScaleFunction {
 public:
  explicit ScaleFunction(RhoFunction rho_fn);

  double operator()(double r) const;
  bool integrates_from_zero() const { return from_zero_; }
  const RhoFunction& rho_function() const { return rho_; }

 private:
  RhoFunction rho_;
  bool from_zero_;
};

double s_function(const RhoFunction& rho_fn, double r);

struct IntegrabilityTest {
  std::string name;
  ExponentEstimate first_order;
  std::optional<RefinedEstimate> refined;
  Integrability verdict = Integrability::Marginal;
};

struct NumericalClassification {
  /// Empty when a test stayed marginal after refinement.
  std::optional<SingularityClassification> classification;
  bool inconclusive = false;
  std::vector<IntegrabilityTest> tests;
};

/// Runs the integrability chain (1+|b|)/sigma^2, rho, (1+|b|)/(rho sigma^2),
/// |b|/sigma^2, (1+|b|) s/(rho sigma^2), s/(rho sigma^2) on the evaluated
/// coefficients and reads off the singularity type.
NumericalClassification classify_numerically(const RadialKernel& kernel, int dim,
                                             double anchor = 1.0);

}  // namespace landmarkbm
