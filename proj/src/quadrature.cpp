#include "mulab/quadrature.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "mulab/errors.hpp"

namespace mulab {

using std::numbers::pi;

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "Gauss-Legendre needs n >= 1");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadratureRule r;
  r.nodes = es.eigenvalues();
  r.weights = 2.0 * es.eigenvectors().row(0).transpose().array().square();
  // Symmetrize to remove eigen-solver asymmetry.
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (r.nodes[n - 1 - i] - r.nodes[i]);
    const double w = 0.5 * (r.weights[n - 1 - i] + r.weights[i]);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

QuadratureRule clenshaw_curtis(int N, double a) {
  if (N < 2) throw Error(ErrorKind::InvalidInput, "Clenshaw-Curtis needs N >= 2");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(N + 1);
  Eigen::VectorXd theta(N + 1);
  for (int j = 0; j <= N; ++j) theta[j] = pi * j / N;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(N - 1);
  if (N % 2 == 0) {
    w[0] = w[N] = 1.0 / (static_cast<double>(N) * N - 1.0);
    for (int k = 1; k < N / 2; ++k)
      for (int i = 1; i < N; ++i) v[i - 1] -= 2.0 * std::cos(2.0 * k * theta[i]) / (4.0 * k * k - 1.0);
    for (int i = 1; i < N; ++i) v[i - 1] -= std::cos(N * theta[i]) / (static_cast<double>(N) * N - 1.0);
  } else {
    w[0] = w[N] = 1.0 / (static_cast<double>(N) * N);
    for (int k = 1; k <= (N - 1) / 2; ++k)
      for (int i = 1; i < N; ++i) v[i - 1] -= 2.0 * std::cos(2.0 * k * theta[i]) / (4.0 * k * k - 1.0);
  }
  for (int i = 1; i < N; ++i) w[i] = 2.0 * v[i - 1] / N;
  QuadratureRule r;
  r.nodes.resize(N + 1);
  r.weights.resize(N + 1);
  for (int j = 0; j <= N; ++j) {
    // 1 - cos(theta) = 2 sin^2(theta / 2) avoids cancellation near the left end.
    const double s = std::sin(0.5 * theta[j]);
    r.nodes[j] = a * s * s;
    r.weights[j] = 0.5 * a * w[j];
  }
  r.nodes[N] = a;
  return r;
}

Eigen::MatrixXd chebyshev_differentiation(int N, double a) {
  // Trefethen's cheb on t_j = cos(pi j / N), then d/dx = -(2 / a) d/dt.
  Eigen::VectorXd t(N + 1), c(N + 1);
  for (int j = 0; j <= N; ++j) {
    t[j] = std::cos(pi * j / N);
    c[j] = ((j == 0 || j == N) ? 2.0 : 1.0) * ((j % 2) ? -1.0 : 1.0);
  }
  Eigen::MatrixXd D(N + 1, N + 1);
  for (int i = 0; i <= N; ++i) {
    for (int j = 0; j <= N; ++j) {
      if (i == j) continue;
      // t_i - t_j computed as a product of sines to keep relative accuracy.
      const double dt = -2.0 * std::sin(pi * (i + j) / (2.0 * N)) * std::sin(pi * (i - j) / (2.0 * N));
      D(i, j) = (c[i] / c[j]) / dt;
    }
  }
  for (int i = 0; i <= N; ++i) {
    double s = 0.0;
    for (int j = 0; j <= N; ++j)
      if (j != i) s += D(i, j);
    D(i, i) = -s;
  }
  return -(2.0 / a) * D;
}

}  // namespace mulab
