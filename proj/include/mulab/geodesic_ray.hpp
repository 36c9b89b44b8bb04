#pragma once

#include <vector>

#include "mulab/exp_integrals.hpp"
#include "mulab/quadrature.hpp"
#include "mulab/toric_metric.hpp"

namespace mulab {

/// q on [0, a] written as alpha + beta x + sum_j jumps[j] (x - kinks[j])_+.
struct KinkForm {
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> kinks;
  std::vector<double> jumps;
};

KinkForm kink_form(const PLConvexFunction& q, double a);

/// q convolved with (35/32)(1 - s^2)^3 at width eps; convex and C^2.
class MollifiedPL {
 public:
  MollifiedPL(const PLConvexFunction& q, double a, double eps);

  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  const KinkForm& form() const { return form_; }
  double eps() const { return eps_; }

 private:
  KinkForm form_;
  double eps_;
};

struct ToricRay {
  SymplecticPotential1D u0;
  PLConvexFunction q;
  double tau = 1.0;
  double smoothing_eps = 0.0;  // 0 selects 1e-3 a
};

/// u_t = u0 + t tau q_eps with momentum f = tau q_eps, both as functions of the moment coordinate.
class RayState {
 public:
  RayState(const ToricRay& ray, double t);

  double a() const { return u0_.a(); }
  double t() const { return t_; }
  double f(double x) const { return tau_ * q_(x); }
  double df(double x) const { return tau_ * q_.derivative(x); }
  double d2f(double x) const { return tau_ * q_.second_derivative(x); }
  double u_derivative(double x) const { return u0_.derivative(x) + t_ * df(x); }
  double u_second_derivative(double x) const { return u0_.second_derivative(x) + t_ * d2f(x); }
  /// 1/u_t''; zero at the endpoints.
  double g(double x) const;
  const MollifiedPL& mollified() const { return q_; }

 private:
  SymplecticPotential1D u0_;
  MollifiedPL q_;
  double tau_;
  double t_;
};

RayState ray_state(const ToricRay& ray, double t);

/// Panels for integrals against dx: breakpoints at 0, a and the mollifier supports, refined to
/// width at most a / (16 resolution), each with a 20-point Gauss-Legendre rule.
QuadratureRule ray_quadrature(const RayState& st, int resolution = 1);

/// W-entropy through integration by parts: -(2 pi (e^f(0) + e^f(a)) - pi int g f'' e^f) / Z + lambda sigma(f).
double ray_w_entropy(const RayState& st, double lambda, int resolution = 1);

struct ConservedIntegrals {
  double c0;  // int e^f dx
  double c1;  // int f e^f dx
};

/// The two integrals computed in the complex coordinate y = u_t'(x), where dx = dy / u_t''.
ConservedIntegrals conserved_integrals(const RayState& st, int resolution = 1);

struct RayTrace {
  std::vector<double> t_grid;
  std::vector<double> w;
  std::vector<double> c0;
  std::vector<double> c1;
  std::vector<bool> non_increasing;
  double max_violation = 0.0;  // max(0, max_i w[i+1] - w[i])
  double drift_c0 = 0.0;       // max_i |c0[i] - c0[0]| / |c0[0]|
  double drift_c1 = 0.0;       // max_i |c1[i] - c1[0]| / max(|c1[0]|, |c0[0]|)
};

RayTrace w_along_ray(const ToricRay& ray, double lambda, const std::vector<double>& t_grid, int resolution = 1);

}  // namespace mulab
