#pragma once

#include <Eigen/Dense>

namespace mulab {

/// sum_k c_k T_k(2x/a - 1) on [0, a].
class ChebyshevSeries {
 public:
  ChebyshevSeries() = default;
  ChebyshevSeries(double a, Eigen::VectorXd coefficients);

  double a() const { return a_; }
  const Eigen::VectorXd& coefficients() const { return c_; }
  bool empty() const { return c_.size() == 0; }

  double operator()(double x) const;
  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
  ChebyshevSeries derivative() const;

 private:
  double a_ = 1.0;
  Eigen::VectorXd c_;
};

}  // namespace mulab
