#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "landmarkbm/kernels.hpp"

namespace landmarkbm {

/// Two or more landmarks coincide.
class DegenerateConfiguration : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Cholesky factorization of the cometric failed in double precision.
class FactorizationFailure : public std::runtime_error {
 public:
  FactorizationFailure(const std::string& what, double condition_estimate)
      : std::runtime_error(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const { return condition_estimate_; }

 private:
  double condition_estimate_;
};

class NotPositiveSemidefinite : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// n landmarks in R^d stored as one flat vector, landmark-major: coordinate c of
/// landmark i lives at index i * d + c.
class LandmarkConfig {
 public:
  LandmarkConfig(int dim, Eigen::VectorXd flat);
  /// One inner vector per landmark.
  static LandmarkConfig from_points(const std::vector<std::vector<double>>& points);

  int dim() const { return dim_; }
  int count() const { return static_cast<int>(flat_.size()) / dim_; }
  Eigen::Index size() const { return flat_.size(); }

  const Eigen::VectorXd& flat() const { return flat_; }
  auto point(int i) const { return flat_.segment(static_cast<Eigen::Index>(i) * dim_, dim_); }
  double distance(int i, int j) const { return (point(i) - point(j)).norm(); }

 private:
  int dim_;
  Eigen::VectorXd flat_;
};

/// Symmetric dense matrix. Construction symmetrizes the input, so symmetry is
/// exact regardless of round-off in whatever produced it.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Eigen::MatrixXd& m);

  Eigen::Index order() const { return m_.rows(); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  Eigen::MatrixXd m_;
};

/// Gamma^i_{lm} over the flat coordinates.
class ChristoffelTensor {
 public:
  explicit ChristoffelTensor(Eigen::Index order)
      : order_(order), data_(static_cast<std::size_t>(order * order * order), 0.0) {}

  Eigen::Index order() const { return order_; }
  double operator()(Eigen::Index i, Eigen::Index l, Eigen::Index m) const {
    return data_[index(i, l, m)];
  }
  double& operator()(Eigen::Index i, Eigen::Index l, Eigen::Index m) {
    return data_[index(i, l, m)];
  }

 private:
  std::size_t index(Eigen::Index i, Eigen::Index l, Eigen::Index m) const {
    return static_cast<std::size_t>((i * order_ + l) * order_ + m);
  }
  Eigen::Index order_;
  std::vector<double> data_;
};

/// K(q): block (i, j) equals k(|q_i - q_j|) I_d.
SymMatrix cometric_matrix(const LandmarkConfig& config, const RadialKernel& kernel);

/// g = K(q)^{-1} through a Cholesky factorization.
SymMatrix metric_matrix(const LandmarkConfig& config, const RadialKernel& kernel);
SymMatrix invert_cometric(const SymMatrix& cometric);

/// dK/dq^a for every flat coordinate a, analytically through k'.
std::vector<Eigen::MatrixXd> cometric_partials(const LandmarkConfig& config,
                                               const RadialKernel& kernel);

/// Christoffel symbols of g, using dg = -g (dK) g.
ChristoffelTensor christoffel(const LandmarkConfig& config, const RadialKernel& kernel);

/// sum_{l,m} K^{lm} Gamma^i_{lm}.
Eigen::VectorXd contract(const SymMatrix& cometric, const ChristoffelTensor& gamma);

/// Ito drift -1/2 sum_{l,m} K^{lm} Gamma^i_{lm} of Brownian motion on landmark
/// space. Evaluated through the closed contraction -1/4 K v with
/// v_a = tr(g dK_a) - 2 sum_l (g dK_l)_{a l}, which never forms Gamma.
Eigen::VectorXd brownian_drift(const LandmarkConfig& config, const RadialKernel& kernel);
/// Same, reusing an already assembled cometric_matrix(config, kernel).
Eigen::VectorXd brownian_drift(const LandmarkConfig& config, const RadialKernel& kernel,
                               const SymMatrix& cometric);

/// Symmetric square root via eigendecomposition. Eigenvalues down to
/// -1e-12 * |K|_2 are treated as zero; anything more negative is rejected.
SymMatrix sqrt_psd(const SymMatrix& matrix);

}  // namespace landmarkbm
