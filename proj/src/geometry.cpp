#include "landmarkbm/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "landmarkbm/format.hpp"

namespace landmarkbm {
namespace {

void require_distinct(const LandmarkConfig& config) {
  for (int i = 0; i < config.count(); ++i)
    for (int j = i + 1; j < config.count(); ++j)
      if (!(config.distance(i, j) > 0.0))
        throw DegenerateConfiguration("landmarks " + std::to_string(i) + " and " +
                                      std::to_string(j) + " coincide");
}

// w(p, j, c) = d r_pj / d q_p^c * k'(r_pj), stored at [(p * n + j) * d + c].
std::vector<double> pair_weights(const LandmarkConfig& config, const RadialKernel& kernel) {
  const int n = config.count();
  const int d = config.dim();
  std::vector<double> w(static_cast<std::size_t>(n * n * d), 0.0);
  for (int p = 0; p < n; ++p) {
    for (int j = p + 1; j < n; ++j) {
      const double r = config.distance(p, j);
      const double slope = kernel.eval_derivative(r) / r;
      for (int c = 0; c < d; ++c) {
        const double v = slope * (config.point(p)[c] - config.point(j)[c]);
        w[static_cast<std::size_t>((p * n + j) * d + c)] = v;
        w[static_cast<std::size_t>((j * n + p) * d + c)] = -v;
      }
    }
  }
  return w;
}

}  // namespace

LandmarkConfig::LandmarkConfig(int dim, Eigen::VectorXd flat) : dim_(dim), flat_(std::move(flat)) {
  if (dim_ < 1) throw std::invalid_argument("landmark dimension must be >= 1");
  if (flat_.size() % dim_ != 0)
    throw std::invalid_argument("flat landmark vector length is not a multiple of the dimension");
  if (flat_.size() / dim_ < 2) throw std::invalid_argument("need at least two landmarks");
  if (!flat_.allFinite()) throw std::invalid_argument("landmark coordinates must be finite");
}

LandmarkConfig LandmarkConfig::from_points(const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw std::invalid_argument("no landmarks given");
  const auto d = static_cast<int>(points.front().size());
  Eigen::VectorXd flat(static_cast<Eigen::Index>(points.size()) * d);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (static_cast<int>(points[i].size()) != d)
      throw std::invalid_argument("landmarks have inconsistent dimensions");
    for (int c = 0; c < d; ++c) flat[static_cast<Eigen::Index>(i) * d + c] = points[i][c];
  }
  return {d, std::move(flat)};
}

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("SymMatrix needs a square matrix");
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix cometric_matrix(const LandmarkConfig& config, const RadialKernel& kernel) {
  require_distinct(config);
  const int n = config.count();
  const int d = config.dim();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(config.size(), config.size());
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) K(i * d + c, i * d + c) = kernel.lambda();
    for (int j = i + 1; j < n; ++j) {
      const double k = kernel.eval(config.distance(i, j));
      for (int c = 0; c < d; ++c) {
        K(i * d + c, j * d + c) = k;
        K(j * d + c, i * d + c) = k;
      }
    }
  }
  return SymMatrix(K);
}

SymMatrix metric_matrix(const LandmarkConfig& config, const RadialKernel& kernel) {
  return invert_cometric(cometric_matrix(config, kernel));
}

SymMatrix invert_cometric(const SymMatrix& K) {
  Eigen::LLT<Eigen::MatrixXd> llt(K.matrix());
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(K.matrix(), Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    const double cond = ev.minCoeff() > 0.0 ? ev.maxCoeff() / ev.minCoeff()
                                            : std::numeric_limits<double>::infinity();
    throw FactorizationFailure("cometric is numerically singular (condition estimate " +
                                   format_double(cond) + ")",
                               cond);
  }
  return SymMatrix(llt.solve(Eigen::MatrixXd::Identity(K.order(), K.order())));
}

std::vector<Eigen::MatrixXd> cometric_partials(const LandmarkConfig& config,
                                               const RadialKernel& kernel) {
  require_distinct(config);
  const int n = config.count();
  const int d = config.dim();
  const auto w = pair_weights(config, kernel);
  const Eigen::Index N = config.size();
  std::vector<Eigen::MatrixXd> slices(static_cast<std::size_t>(N),
                                      Eigen::MatrixXd::Zero(N, N));
  for (int p = 0; p < n; ++p) {
    for (int c = 0; c < d; ++c) {
      auto& slice = slices[static_cast<std::size_t>(p * d + c)];
      for (int j = 0; j < n; ++j) {
        if (j == p) continue;
        const double v = w[static_cast<std::size_t>((p * n + j) * d + c)];
        for (int b = 0; b < d; ++b) {
          slice(p * d + b, j * d + b) = v;
          slice(j * d + b, p * d + b) = v;
        }
      }
    }
  }
  return slices;
}

ChristoffelTensor christoffel(const LandmarkConfig& config, const RadialKernel& kernel) {
  const SymMatrix K = cometric_matrix(config, kernel);
  const SymMatrix g = metric_matrix(config, kernel);
  const auto dK = cometric_partials(config, kernel);
  const Eigen::Index N = config.size();

  std::vector<Eigen::MatrixXd> dg;
  dg.reserve(dK.size());
  for (const auto& slice : dK) dg.push_back(-g.matrix() * slice * g.matrix());

  ChristoffelTensor gamma(N);
  Eigen::VectorXd lowered(N);
  for (Eigen::Index l = 0; l < N; ++l) {
    for (Eigen::Index m = l; m < N; ++m) {
      // Gamma_{a,lm} = 1/2 (d_l g_am + d_m g_al - d_a g_lm)
      for (Eigen::Index a = 0; a < N; ++a)
        lowered[a] = 0.5 * (dg[l](a, m) + dg[m](a, l) - dg[a](l, m));
      const Eigen::VectorXd raised = K.matrix() * lowered;
      for (Eigen::Index i = 0; i < N; ++i) {
        gamma(i, l, m) = raised[i];
        gamma(i, m, l) = raised[i];
      }
    }
  }
  return gamma;
}

Eigen::VectorXd contract(const SymMatrix& cometric, const ChristoffelTensor& gamma) {
  const Eigen::Index N = gamma.order();
  if (cometric.order() != N) throw std::invalid_argument("contract: order mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index l = 0; l < N; ++l)
      for (Eigen::Index m = 0; m < N; ++m) out[i] += cometric(l, m) * gamma(i, l, m);
  return out;
}

Eigen::VectorXd brownian_drift(const LandmarkConfig& config, const RadialKernel& kernel) {
  return brownian_drift(config, kernel, cometric_matrix(config, kernel));
}

Eigen::VectorXd brownian_drift(const LandmarkConfig& config, const RadialKernel& kernel,
                               const SymMatrix& K) {
  const SymMatrix g = invert_cometric(K);
  const auto w = pair_weights(config, kernel);
  const int n = config.count();
  const int d = config.dim();
  const Eigen::Index N = config.size();
  const auto& G = g.matrix();

  Eigen::VectorXd v(N);
  for (int a = 0; a < N; ++a) {
    const int p = a / d;
    const int c = a % d;
    double trace = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == p) continue;
      double block = 0.0;
      for (int b = 0; b < d; ++b) block += G(p * d + b, j * d + b);
      trace += 2.0 * block * w[static_cast<std::size_t>((p * n + j) * d + c)];
    }
    double column_sum = 0.0;
    for (int pp = 0; pp < n; ++pp)
      for (int cc = 0; cc < d; ++cc)
        for (int j = 0; j < n; ++j) {
          if (j == pp) continue;
          column_sum += G(a, j * d + cc) * w[static_cast<std::size_t>((pp * n + j) * d + cc)];
        }
    v[a] = trace - 2.0 * column_sum;
  }
  return -0.25 * (K.matrix() * v);
}

SymMatrix sqrt_psd(const SymMatrix& matrix) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(matrix.matrix());
  if (eig.info() != Eigen::Success) throw NotPositiveSemidefinite("eigendecomposition failed");
  Eigen::VectorXd ev = eig.eigenvalues();
  const double norm = ev.cwiseAbs().maxCoeff();
  if (ev.minCoeff() < -1e-12 * norm)
    throw NotPositiveSemidefinite("matrix has eigenvalue " + format_double(ev.minCoeff()));
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  const auto& V = eig.eigenvectors();
  return SymMatrix(V * ev.asDiagonal() * V.transpose());
}

}  // namespace landmarkbm
