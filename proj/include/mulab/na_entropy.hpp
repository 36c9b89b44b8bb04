#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mulab/exp_integrals.hpp"
#include "mulab/polytope.hpp"

namespace mulab {

/// Toric test configuration: polytope and a PL convex q <= 0 on it, with the induced subdivision.
class ToricTestConfig {
 public:
  ToricTestConfig(LatticePolytope P, PLConvexFunction q);

  const LatticePolytope& polytope() const { return P_; }
  const PLConvexFunction& q() const { return q_; }
  const Subdivision& subdivision() const { return sub_; }
  int dim() const { return P_.dim(); }

 private:
  LatticePolytope P_;
  PLConvexFunction q_;
  Subdivision sub_;
};

struct EntropyParams {
  double lambda = 0.0;
  double tau = 0.0;
};

struct NAEntropy {
  double mu;         // -2 pi B0 / I0
  double sigma;      // (n I0 + I1) / I0 - log I0
  double mu_lambda;  // mu + lambda sigma
};

NAEntropy na_entropy(const ToricTestConfig& tc, const EntropyParams& params);
double check_mu_na(const ToricTestConfig& tc, double tau);
double check_sigma(const ToricTestConfig& tc, double tau);
double mu_lambda_na(const ToricTestConfig& tc, const EntropyParams& params);

/// mu-entropy of the vector xi: the toric functional with the single affine exponent <xi, mu>.
double vector_mu_entropy(const LatticePolytope& P, const Eigen::VectorXd& xi, double lambda);

/// Gradient in xi: -2 pi d(B/I) + lambda Cov(mu) xi, with moments against e^<xi, mu>.
Eigen::VectorXd vector_mu_entropy_gradient(const LatticePolytope& P, const Eigen::VectorXd& xi, double lambda);

/// Symmetrized central finite-difference Hessian of the analytic gradient.
Eigen::MatrixXd vector_mu_entropy_hessian(const LatticePolytope& P, const Eigen::VectorXd& xi, double lambda,
                                          double h = 1e-5);

/// Minus the tau-derivative at 0 of the toric functional with exponent <xi, mu> + tau q.
double mu_futaki(const LatticePolytope& P, const Eigen::VectorXd& xi, const PLConvexFunction& direction, double lambda);

/// Pushforward of Lebesgue measure on P under -q. Density on interval i, for breakpoints[i] <= t <= breakpoints[i+1],
/// is densities[i][0] + densities[i][1] (t - breakpoints[i]).
struct DHMeasure {
  std::vector<double> breakpoints;
  std::vector<Eigen::Vector2d> densities;
  std::vector<std::pair<double, double>> point_masses;

  double total_mass() const;
  /// int t^k dDH for k = 0, 1, 2 after centring at `centre`.
  double moment(int k, double centre = 0.0) const;
  double cdf(double t) const;
};

DHMeasure dh_measure(const ToricTestConfig& tc);

/// n! int (t - b)^2 dDH with b the DH barycentre.
double norm_squared(const ToricTestConfig& tc);
double norm_squared(const DHMeasure& dh, int dim);

/// -(1 / (2 L)) (4 pi tau M + tau^2 N) with L = (L^n) and N = the squared norm.
double c_na(double self_intersection, double norm2, double tau, double m_na);
double c_na(const ToricTestConfig& tc, double tau, double m_na);

struct CnaMax {
  double tau;
  double value;
};

/// Closed-form maximum over tau >= 0 of the quadratic above.
CnaMax max_c_na(double self_intersection, double norm2, double m_na);
CnaMax max_c_na(const ToricTestConfig& tc, double m_na);

/// Numerical maximum over tau >= 0 (bracketing, golden section, parabolic polish).
CnaMax max_c_na_numeric(double self_intersection, double norm2, double m_na);

}  // namespace mulab
