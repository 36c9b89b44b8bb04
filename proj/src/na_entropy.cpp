#include "mulab/na_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mulab {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using std::numbers::pi;

ToricTestConfig::ToricTestConfig(LatticePolytope P, PLConvexFunction q) : P_(std::move(P)), q_(std::move(q)) {
  if (q_.dim() != P_.dim()) throw Error(ErrorKind::InvalidInput, "q and P have different dimensions");
  if (q_.max_on(P_) > 1e-10) throw Error(ErrorKind::InvalidInput, "q must be <= 0 on P");
  sub_ = subdivide(P_, q_);
}

NAEntropy na_entropy(const ToricTestConfig& tc, const EntropyParams& params) {
  const auto b = bundle(tc.subdivision(), tc.q(), params.tau);
  NAEntropy e;
  e.mu = -2.0 * pi * b.B0 / b.I0;
  e.sigma = (tc.dim() * b.I0 + b.I1) / b.I0 - std::log(b.I0);
  e.mu_lambda = e.mu + params.lambda * e.sigma;
  return e;
}

double check_mu_na(const ToricTestConfig& tc, double tau) { return na_entropy(tc, {0.0, tau}).mu; }

double check_sigma(const ToricTestConfig& tc, double tau) { return na_entropy(tc, {0.0, tau}).sigma; }

double mu_lambda_na(const ToricTestConfig& tc, const EntropyParams& params) { return na_entropy(tc, params).mu_lambda; }

double vector_mu_entropy(const LatticePolytope& P, const VectorXd& xi, double lambda) {
  const auto w = weighted_moments(P, xi);
  const double mu = -2.0 * pi * w.K0 / w.J0;
  const double sigma = P.dim() + xi.dot(w.J1) / w.J0 - std::log(w.J0) - w.shift;
  return mu + lambda * sigma;
}

VectorXd vector_mu_entropy_gradient(const LatticePolytope& P, const VectorXd& xi, double lambda) {
  const auto w = weighted_moments(P, xi);
  const VectorXd mean = w.J1 / w.J0;
  const MatrixXd cov = w.J2 / w.J0 - mean * mean.transpose();
  const VectorXd d_ratio = w.K1 / w.J0 - (w.K0 / w.J0) * mean;
  return -2.0 * pi * d_ratio + lambda * cov * xi;
}

MatrixXd vector_mu_entropy_hessian(const LatticePolytope& P, const VectorXd& xi, double lambda, double h) {
  const int n = static_cast<int>(xi.size());
  MatrixXd H(n, n);
  for (int i = 0; i < n; ++i) {
    VectorXd xp = xi, xm = xi;
    xp[i] += h;
    xm[i] -= h;
    H.col(i) = (vector_mu_entropy_gradient(P, xp, lambda) - vector_mu_entropy_gradient(P, xm, lambda)) / (2.0 * h);
  }
  return 0.5 * (H + H.transpose());
}

double mu_futaki(const LatticePolytope& P, const VectorXd& xi, const PLConvexFunction& direction, double lambda) {
  if (direction.dim() != P.dim()) throw Error(ErrorKind::InvalidInput, "direction and P have different dimensions");
  const auto w = weighted_moments(subdivide(P, direction), direction, xi);
  const double I = w.J0, B = w.K0, J = xi.dot(w.J1);
  const double dI = w.qJ0, dB = w.qK0, dJ = w.qJ0 + xi.dot(w.qJ1);
  const double d_mu = -2.0 * pi * (dB * I - B * dI) / (I * I);
  const double d_sigma = (dJ * I - J * dI) / (I * I) - dI / I;
  return -(d_mu + lambda * d_sigma);
}

namespace {

struct LinearPiece {
  double ya, yb, fa, fb;
};

bool nearly_equal(double a, double b) { return std::abs(a - b) <= 1e-13 * (1.0 + std::max(std::abs(a), std::abs(b))); }

void add_point_mass(std::vector<std::pair<double, double>>& masses, double at, double m) {
  for (auto& pm : masses) {
    if (nearly_equal(pm.first, at)) {
      pm.second += m;
      return;
    }
  }
  masses.emplace_back(at, m);
}

// Gauss-Legendre 3-point rule, exact up to degree 5.
template <class F>
double gl3(double a, double b, F f) {
  static const double x[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
  static const double w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s += w[i] * f(c + h * x[i]);
  return h * s;
}

}  // namespace

DHMeasure dh_measure(const ToricTestConfig& tc) {
  DHMeasure dh;
  std::vector<LinearPiece> pieces;
  for (const auto& cell : tc.subdivision().cells) {
    const auto& p = tc.q().pieces()[cell.piece];
    for (const auto& S : cell.simplices) {
      std::vector<double> y;
      for (const auto& v : S.vertices) y.push_back(-p(v));
      std::sort(y.begin(), y.end());
      const double A = S.measure;
      if (nearly_equal(y.front(), y.back())) {
        add_point_mass(dh.point_masses, 0.5 * (y.front() + y.back()), A);
        continue;
      }
      if (y.size() == 2) {
        const double f = A / (y[1] - y[0]);
        pieces.push_back({y[0], y[1], f, f});
      } else {
        const double peak = 2.0 * A / (y[2] - y[0]);
        if (y[1] > y[0]) pieces.push_back({y[0], y[1], 0.0, peak});
        if (y[2] > y[1]) pieces.push_back({y[1], y[2], peak, 0.0});
      }
    }
  }
  std::sort(dh.point_masses.begin(), dh.point_masses.end());
  for (const auto& lp : pieces) {
    dh.breakpoints.push_back(lp.ya);
    dh.breakpoints.push_back(lp.yb);
  }
  std::sort(dh.breakpoints.begin(), dh.breakpoints.end());
  dh.breakpoints.erase(std::unique(dh.breakpoints.begin(), dh.breakpoints.end()), dh.breakpoints.end());
  auto density_at = [&](double t, double lo, double hi) {
    double f = 0.0;
    for (const auto& lp : pieces) {
      if (lp.ya <= lo && hi <= lp.yb) f += lp.fa + (lp.fb - lp.fa) * (t - lp.ya) / (lp.yb - lp.ya);
    }
    return f;
  };
  for (std::size_t k = 0; k + 1 < dh.breakpoints.size(); ++k) {
    const double lo = dh.breakpoints[k], hi = dh.breakpoints[k + 1];
    const double f0 = density_at(lo, lo, hi), f1 = density_at(hi, lo, hi);
    dh.densities.emplace_back(f0, (f1 - f0) / (hi - lo));
  }
  if (dh.breakpoints.size() == 1) dh.breakpoints.clear();
  return dh;
}

double DHMeasure::total_mass() const { return moment(0); }

double DHMeasure::moment(int k, double centre) const {
  double s = 0.0;
  for (std::size_t i = 0; i < densities.size(); ++i) {
    const double lo = breakpoints[i];
    const auto& d = densities[i];
    s += gl3(lo, breakpoints[i + 1], [&](double t) { return (d[0] + d[1] * (t - lo)) * std::pow(t - centre, k); });
  }
  for (const auto& pm : point_masses) s += pm.second * std::pow(pm.first - centre, k);
  return s;
}

double DHMeasure::cdf(double t) const {
  double s = 0.0;
  for (std::size_t i = 0; i < densities.size(); ++i) {
    const double lo = breakpoints[i];
    if (t <= lo) break;
    const double x = std::min(t, breakpoints[i + 1]) - lo;
    s += densities[i][0] * x + 0.5 * densities[i][1] * x * x;
  }
  for (const auto& pm : point_masses)
    if (pm.first <= t) s += pm.second;
  return s;
}

double norm_squared(const DHMeasure& dh, int dim) {
  double fact = 1.0;
  for (int i = 2; i <= dim; ++i) fact *= i;
  const double b = dh.moment(1) / dh.moment(0);
  return std::max(0.0, fact * dh.moment(2, b));
}

double norm_squared(const ToricTestConfig& tc) { return norm_squared(dh_measure(tc), tc.dim()); }

double c_na(double self_intersection, double norm2, double tau, double m_na) {
  return -(tau * 4.0 * pi * m_na + tau * tau * norm2) / (2.0 * self_intersection);
}

double c_na(const ToricTestConfig& tc, double tau, double m_na) {
  return c_na(to_double(self_intersection(tc.polytope())), norm_squared(tc), tau, m_na);
}

CnaMax max_c_na(double self_intersection, double norm2, double m_na) {
  if (m_na >= 0) return {0.0, 0.0};
  if (norm2 <= 0) throw Error(ErrorKind::NormZero, "the norm vanishes while M_NA < 0: C_NA is unbounded");
  const double tau = -2.0 * pi * m_na / norm2;
  return {tau, 2.0 * pi * pi * m_na * m_na / (self_intersection * norm2)};
}

CnaMax max_c_na(const ToricTestConfig& tc, double m_na) {
  return max_c_na(to_double(self_intersection(tc.polytope())), norm_squared(tc), m_na);
}

CnaMax max_c_na_numeric(double self_intersection, double norm2, double m_na) {
  auto f = [&](double t) { return c_na(self_intersection, norm2, t, m_na); };
  double hi = 1.0;
  int guard = 0;
  while (f(hi) >= f(0.5 * hi) && guard++ < 200) hi *= 2.0;
  if (guard >= 200) throw Error(ErrorKind::NormZero, "C_NA is unbounded in tau");
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.0, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-12 * (1.0 + b); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  // Parabolic polish through three points around the bracket.
  double t = 0.5 * (a + b);
  const double h = std::max(1e-3 * (1.0 + t), b - a);
  const double x0 = t - h, x2 = t + h;
  const double f0 = f(x0), f1 = f(t), f2 = f(x2);
  const double denom = f0 - 2.0 * f1 + f2;
  if (denom < 0) t = t + 0.5 * h * (f0 - f2) / denom;
  t = std::max(t, 0.0);
  if (f(0.0) >= f(t)) return {0.0, f(0.0)};
  return {t, f(t)};
}

}  // namespace mulab
