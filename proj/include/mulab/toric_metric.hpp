#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mulab/chebyshev.hpp"

namespace mulab {

/// u = u0 + p on [0, a] with u0 = (x log x + (a - x) log(a - x)) / 2 and p a Chebyshev series.
/// Everything downstream uses g = 1/u'' = 2x(a - x) / D with D = a + 2x(a - x) p''.
class SymplecticPotential1D {
 public:
  explicit SymplecticPotential1D(double a, Eigen::VectorXd perturbation = {});

  static constexpr int max_coefficients = 64;

  double a() const { return a_; }
  const ChebyshevSeries& perturbation() const { return p_[0]; }

  double value(double x) const;
  double derivative(double x) const;
  /// u''; infinite at the endpoints.
  double second_derivative(double x) const;

  struct InverseHessian {
    double g, dg, d2g;
  };
  InverseHessian inverse_hessian(double x) const;
  /// a + 2x(a - x) p''(x); positive exactly when u is strictly convex.
  double convexity_factor(double x) const;

 private:
  double a_;
  ChebyshevSeries p_[5];  // p and its first four derivatives
};

/// Clenshaw-Curtis nodes x = a sin^2(theta / 2) on [0, a] with their spectral differentiation matrix.
struct Measure1D {
  double a;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  Eigen::MatrixXd diff;

  int size() const { return static_cast<int>(nodes.size()); }
  double integrate(const Eigen::VectorXd& values) const { return weights.dot(values); }
};

Measure1D measure_1d(double a, int N = 128);

/// Values of f on the nodes of a Measure1D.
struct Momentum1D {
  Eigen::VectorXd values;
  bool mean_normalized = false;
};

Momentum1D linear_momentum(const Measure1D& m, double xi);
Momentum1D momentum_from(const Measure1D& m, const ChebyshevSeries& f);

/// s = -pi (1/u'')''.
double scalar_curvature(const SymplecticPotential1D& u, double x);
Eigen::VectorXd scalar_curvature(const SymplecticPotential1D& u, const Measure1D& m);

/// -int (s + pi g f'^2 - lambda (1 + f)) e^f / int e^f - lambda log int e^f.
double w_entropy(const SymplecticPotential1D& u, const Measure1D& m, const Momentum1D& f, double lambda);

/// s - 2 pi (g f')' - pi g f'^2 - lambda f at the nodes.
Eigen::VectorXd weighted_scalar_curvature(const SymplecticPotential1D& u, const Measure1D& m, const Momentum1D& f,
                                          double lambda);

struct CriticalMomentum {
  Momentum1D f;
  double value = 0.0;
  double residual = 0.0;
  int iterations = 0;
  std::vector<double> residual_history;
};

/// Damped Newton on the collocated Euler-Lagrange equation with an integral gauge, then shifted
/// so that int f e^f = 0. Refuses lambda > 0.
CriticalMomentum critical_momentum(const SymplecticPotential1D& u, const Measure1D& m, double lambda,
                                   double tol = 1e-9, int max_iter = 60,
                                   const std::optional<Momentum1D>& initial = std::nullopt);

double mu_entropy_metric(const SymplecticPotential1D& u, const Measure1D& m, double lambda);

/// Ricci potential for a = 2: (2 - 2x) p' + 2p + log D, up to a constant.
Momentum1D ricci_potential(const SymplecticPotential1D& u, const Measure1D& m);
/// 2 pi (int h e^h / int e^h - log int e^h).
double h_entropy(const SymplecticPotential1D& u, const Measure1D& m);

/// -(W^{1/kappa}(kappa f) - W^{1/kappa}(0)) / kappa, evaluated without cancellation.
double w_kappa(const SymplecticPotential1D& u, const Measure1D& m, const Momentum1D& f, double kappa);
/// -<(s^ - f^)^2> / 2 + <s^2> / 2, averages against dx, hats mean-zero parts.
double w_ext(const SymplecticPotential1D& u, const Measure1D& m, const Momentum1D& f);
double calabi(const SymplecticPotential1D& u, const Measure1D& m);

}  // namespace mulab
