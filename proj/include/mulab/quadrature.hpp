#pragma once

#include <Eigen/Dense>

namespace mulab {

struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Golub-Welsch).
QuadratureRule gauss_legendre(int n);

/// Clenshaw-Curtis rule on the Chebyshev-Lobatto points of [0, a], ordered increasingly:
/// x_j = a (1 - cos(pi j / N)) / 2 for j = 0..N.
QuadratureRule clenshaw_curtis(int N, double a);

/// Spectral differentiation matrix on the nodes of clenshaw_curtis(N, a).
Eigen::MatrixXd chebyshev_differentiation(int N, double a);

}  // namespace mulab
