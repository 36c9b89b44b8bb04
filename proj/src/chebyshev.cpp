#include "mulab/chebyshev.hpp"

#include <cmath>

#include "mulab/errors.hpp"

namespace mulab {

ChebyshevSeries::ChebyshevSeries(double a, Eigen::VectorXd coefficients) : a_(a), c_(std::move(coefficients)) {
  if (!(a > 0) || !std::isfinite(a)) throw Error(ErrorKind::InvalidInput, "interval length must be positive");
  if (!c_.allFinite()) throw Error(ErrorKind::NonFiniteInput, "Chebyshev coefficients must be finite");
}

double ChebyshevSeries::operator()(double x) const {
  const Eigen::Index n = c_.size();
  if (n == 0) return 0.0;
  const double t = 2.0 * x / a_ - 1.0;
  double b1 = 0.0, b2 = 0.0;
  for (Eigen::Index k = n - 1; k >= 1; --k) {
    const double b0 = 2.0 * t * b1 - b2 + c_[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c_[0];
}

Eigen::VectorXd ChebyshevSeries::operator()(const Eigen::VectorXd& x) const {
  return x.unaryExpr([this](double v) { return (*this)(v); });
}

ChebyshevSeries ChebyshevSeries::derivative() const {
  const Eigen::Index n = c_.size();
  ChebyshevSeries d;
  d.a_ = a_;
  if (n <= 1) return d;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n - 1);
  for (Eigen::Index k = n - 1; k >= 1; --k) e[k - 1] = (k + 1 < n - 1 ? e[k + 1] : 0.0) + 2.0 * k * c_[k];
  e[0] *= 0.5;
  d.c_ = e * (2.0 / a_);
  return d;
}

}  // namespace mulab
