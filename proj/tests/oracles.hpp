#pragma once

// Reference computations that do not go through the library's own formulas.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Profile = std::function<double(double)>;

inline double k12(double r) { return std::exp(-r); }
inline double k32(double r) { return 2.0 * (1.0 + r) * std::exp(-r); }
inline double k52(double r) { return (3.0 + 3.0 * r + r * r) * std::exp(-r); }
inline double k72(double r) { return (15.0 + 15.0 * r + 6.0 * r * r + r * r * r) * std::exp(-r); }
inline double gauss(double r) { return std::exp(-r * r); }

// K assembled straight from the definition; q is landmark-major.
inline Eigen::MatrixXd cometric(const Profile& k, const Eigen::VectorXd& q, int d) {
  const Eigen::Index N = q.size();
  const int n = static_cast<int>(N) / d;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double r = (q.segment(i * d, d) - q.segment(j * d, d)).norm();
      for (int c = 0; c < d; ++c) K(i * d + c, j * d + c) = k(r);
    }
  return K;
}

inline Eigen::MatrixXd metric(const Profile& k, const Eigen::VectorXd& q, int d) {
  return cometric(k, q, d).fullPivLu().inverse();
}

// Gamma^i_{lm} = 1/2 K^{ia} (d_l g_am + d_m g_al - d_a g_lm), metric derivatives by
// central differences. Returned as gamma[(i * N + l) * N + m].
inline std::vector<double> christoffel_fd(const Profile& k, const Eigen::VectorXd& q, int d,
                                          double h = 1e-5) {
  const Eigen::Index N = q.size();
  std::vector<Eigen::MatrixXd> dg(static_cast<std::size_t>(N));
  for (Eigen::Index a = 0; a < N; ++a) {
    Eigen::VectorXd qp = q, qm = q;
    qp[a] += h;
    qm[a] -= h;
    dg[static_cast<std::size_t>(a)] = (metric(k, qp, d) - metric(k, qm, d)) / (2.0 * h);
  }
  const Eigen::MatrixXd K = cometric(k, q, d);
  std::vector<double> out(static_cast<std::size_t>(N * N * N), 0.0);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index l = 0; l < N; ++l)
      for (Eigen::Index m = 0; m < N; ++m) {
        double s = 0.0;
        for (Eigen::Index a = 0; a < N; ++a)
          s += K(i, a) * (dg[l](a, m) + dg[m](a, l) - dg[a](l, m));
        out[static_cast<std::size_t>((i * N + l) * N + m)] = 0.5 * s;
      }
  return out;
}

inline double central_diff(const Profile& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Least-squares slope of log f against log r on a log-uniform grid.
inline double loglog_slope(const Profile& f, double lo, double hi, int points = 50) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < points; ++i) {
    const double x = std::log(lo) + (std::log(hi) - std::log(lo)) * i / (points - 1);
    const double y = std::log(f(std::exp(x)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (points * sxy - sx * sy) / (points * sxx - sx * sx);
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return best;
}

// Distinct random configuration with all pairwise distances at least min_sep.
inline Eigen::VectorXd random_config(std::mt19937_64& rng, int n, int d, double min_sep = 0.2,
                                     double spread = 2.0) {
  std::uniform_real_distribution<double> u(-spread, spread);
  while (true) {
    Eigen::VectorXd q(n * d);
    for (Eigen::Index a = 0; a < q.size(); ++a) q[a] = u(rng);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = i + 1; j < n && ok; ++j)
        ok = (q.segment(i * d, d) - q.segment(j * d, d)).norm() >= min_sep;
    if (ok) return q;
  }
}

}  // namespace oracle
