#include "mulab/toric_metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/LU>

#include "mulab/errors.hpp"
#include "mulab/quadrature.hpp"

namespace mulab {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using std::numbers::pi;

namespace {

double xlogx(double x) { return x > 0 ? x * std::log(x) : 0.0; }

void check_size(const Measure1D& m, const Momentum1D& f) {
  if (f.values.size() != m.nodes.size()) throw Error(ErrorKind::InvalidInput, "momentum does not match the measure");
  if (!f.values.allFinite()) throw Error(ErrorKind::NonFiniteMomentum, "momentum has non-finite values");
}

void check_measure(const SymplecticPotential1D& u, const Measure1D& m) {
  if (std::abs(m.a - u.a()) > 1e-14 * u.a()) throw Error(ErrorKind::InvalidInput, "measure and potential differ in a");
}

struct Fields {
  VectorXd g, dg, s;
};

Fields fields(const SymplecticPotential1D& u, const Measure1D& m) {
  Fields out{VectorXd(m.size()), VectorXd(m.size()), VectorXd(m.size())};
  for (int i = 0; i < m.size(); ++i) {
    const auto ih = u.inverse_hessian(m.nodes[i]);
    out.g[i] = ih.g;
    out.dg[i] = ih.dg;
    out.s[i] = -pi * ih.d2g;
  }
  return out;
}

// Weights e^{f - max f} and the shift.
std::pair<VectorXd, double> exp_weights(const Measure1D& m, const VectorXd& f) {
  const double shift = f.maxCoeff();
  return {m.weights.cwiseProduct((f.array() - shift).exp().matrix()), shift};
}

}  // namespace

SymplecticPotential1D::SymplecticPotential1D(double a, VectorXd perturbation) : a_(a) {
  if (!(a > 0) || !std::isfinite(a)) throw Error(ErrorKind::InvalidInput, "a must be positive");
  if (perturbation.size() > max_coefficients)
    throw Error(ErrorKind::InvalidInput, "perturbation has more than 64 Chebyshev coefficients");
  p_[0] = ChebyshevSeries(a, std::move(perturbation));
  for (int k = 1; k < 5; ++k) p_[k] = p_[k - 1].derivative();
  const auto grid = clenshaw_curtis(512, a).nodes;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double d = convexity_factor(grid[i]);
    if (!(d > 0)) throw Error(ErrorKind::NonConvexPotential, "u'' is not positive on (0, a)");
  }
}

double SymplecticPotential1D::value(double x) const {
  return 0.5 * (xlogx(x) + xlogx(a_ - x)) + p_[0](x);
}

double SymplecticPotential1D::derivative(double x) const {
  return 0.5 * (std::log(x) - std::log(a_ - x)) + p_[1](x);
}

double SymplecticPotential1D::second_derivative(double x) const {
  const double h = 2.0 * x * (a_ - x);
  if (h <= 0) return std::numeric_limits<double>::infinity();
  return convexity_factor(x) / h;
}

double SymplecticPotential1D::convexity_factor(double x) const { return a_ + 2.0 * x * (a_ - x) * p_[2](x); }

SymplecticPotential1D::InverseHessian SymplecticPotential1D::inverse_hessian(double x) const {
  const double h = 2.0 * x * (a_ - x), h1 = 2.0 * a_ - 4.0 * x, h2 = -4.0;
  const double p2 = p_[2](x), p3 = p_[3](x), p4 = p_[4](x);
  const double D = a_ + h * p2;
  const double D1 = h1 * p2 + h * p3;
  const double D2 = h2 * p2 + 2.0 * h1 * p3 + h * p4;
  return {h / D, h1 / D - h * D1 / (D * D),
          h2 / D - 2.0 * h1 * D1 / (D * D) + h * (2.0 * D1 * D1 / (D * D * D) - D2 / (D * D))};
}

Measure1D measure_1d(double a, int N) {
  auto rule = clenshaw_curtis(N, a);
  return {a, std::move(rule.nodes), std::move(rule.weights), chebyshev_differentiation(N, a)};
}

Momentum1D linear_momentum(const Measure1D& m, double xi) { return {xi * m.nodes, false}; }

Momentum1D momentum_from(const Measure1D& m, const ChebyshevSeries& f) { return {f(m.nodes), false}; }

double scalar_curvature(const SymplecticPotential1D& u, double x) { return -pi * u.inverse_hessian(x).d2g; }

VectorXd scalar_curvature(const SymplecticPotential1D& u, const Measure1D& m) {
  check_measure(u, m);
  return fields(u, m).s;
}

double w_entropy(const SymplecticPotential1D& u, const Measure1D& m, const Momentum1D& f, double lambda) {
  check_measure(u, m);
  check_size(m, f);
  const auto F = fields(u, m);
  const VectorXd df = m.diff * f.values;
  const auto [w, shift] = exp_weights(m, f.values);
  const double Z = w.sum();
  const VectorXd integrand =
      F.s + pi * F.g.cwiseProduct(df.cwiseAbs2()) - lambda * (VectorXd::Ones(m.size()) + f.values);
  return -w.dot(integrand) / Z - lambda * (std::log(Z) + shift);
}

VectorXd weighted_scalar_curvature(const SymplecticPotential1D& u, const Measure1D& m, const Momentum1D& f,
                                   double lambda) {
  check_measure(u, m);
  check_size(m, f);
  const auto F = fields(u, m);
  const VectorXd df = m.diff * f.values;
  const VectorXd d2f = m.diff * df;
  return F.s - 2.0 * pi * (F.dg.cwiseProduct(df) + F.g.cwiseProduct(d2f)) - pi * F.g.cwiseProduct(df.cwiseAbs2()) -
         lambda * f.values;
}

namespace {

double residual_of(const Measure1D& m, const VectorXd& S, const VectorXd& f) {
  const auto [w, shift] = exp_weights(m, f);
  const double mean = w.dot(S) / w.sum();
  return (S.array() - mean).abs().maxCoeff();
}

}  // namespace

CriticalMomentum critical_momentum(const SymplecticPotential1D& u, const Measure1D& m, double lambda, double tol,
                                   int max_iter, const std::optional<Momentum1D>& initial) {
  if (lambda > 0) throw Error(ErrorKind::PositiveLambda, "critical_momentum requires lambda <= 0");
  check_measure(u, m);
  const int n = m.size();
  const auto F = fields(u, m);
  const MatrixXd& D = m.diff;
  const MatrixXd D2 = D * D;
  const MatrixXd L0 = -2.0 * pi * (F.dg.asDiagonal() * D + F.g.asDiagonal() * D2);
  const double wsum = m.weights.sum();

  VectorXd f = VectorXd::Zero(n);
  if (initial) {
    check_size(m, *initial);
    f = initial->values;
  }
  f.array() -= m.weights.dot(f) / wsum;
  double c = 0.0;

  // Unknowns (f, c); equations S(f) - c = 0 at every node and sum w f = 0.
  auto system = [&](const VectorXd& fv, double cv) {
    const VectorXd df = D * fv;
    VectorXd r(n + 1);
    r.head(n) = F.s + L0 * fv - pi * F.g.cwiseProduct(df.cwiseAbs2()) - lambda * fv - VectorXd::Constant(n, cv);
    r[n] = m.weights.dot(fv) / wsum;
    return r;
  };
  {
    const VectorXd S = system(f, 0.0).head(n);
    const auto [w, shift] = exp_weights(m, f);
    c = w.dot(S) / w.sum();
  }

  CriticalMomentum out;
  VectorXd r = system(f, c);
  for (int it = 0; it < max_iter; ++it) {
    const Momentum1D cur{f, false};
    const double res = residual_of(m, weighted_scalar_curvature(u, m, cur, lambda), f);
    out.residual_history.push_back(res);
    out.iterations = it;
    if (res <= tol) break;
    const VectorXd df = D * f;
    MatrixXd J(n + 1, n + 1);
    J.topLeftCorner(n, n) = L0 - 2.0 * pi * (F.g.cwiseProduct(df)).asDiagonal() * D;
    J.topLeftCorner(n, n).diagonal().array() -= lambda;
    J.topRightCorner(n, 1).setConstant(-1.0);
    J.bottomLeftCorner(1, n) = m.weights.transpose() / wsum;
    J(n, n) = 0.0;
    const VectorXd step = J.partialPivLu().solve(-r);
    if (!step.allFinite()) break;
    double alpha = 1.0;
    const double r0 = r.lpNorm<Eigen::Infinity>();
    for (int ls = 0; ls < 30; ++ls, alpha *= 0.5) {
      const VectorXd ft = f + alpha * step.head(n);
      const double ct = c + alpha * step[n];
      const VectorXd rt = system(ft, ct);
      if (rt.allFinite() && (rt.lpNorm<Eigen::Infinity>() < r0 || ls == 29)) {
        f = ft;
        c = ct;
        r = rt;
        break;
      }
    }
    out.iterations = it + 1;
  }
  out.residual = residual_of(m, weighted_scalar_curvature(u, m, Momentum1D{f, false}, lambda), f);
  if (out.residual_history.empty() || out.residual_history.back() != out.residual)
    out.residual_history.push_back(out.residual);
  if (!(out.residual <= tol))
    throw Error(ErrorKind::NonConvergence, "critical momentum did not converge; residual " +
                                               std::to_string(out.residual) + " after " +
                                               std::to_string(out.iterations) + " iterations");
  const auto [w, shift] = exp_weights(m, f);
  f.array() -= w.dot(f) / w.sum();
  out.f = {f, true};
  out.value = w_entropy(u, m, out.f, lambda);
  return out;
}

double mu_entropy_metric(const SymplecticPotential1D& u, const Measure1D& m, double lambda) {
  return critical_momentum(u, m, lambda).value;
}

Momentum1D ricci_potential(const SymplecticPotential1D& u, const Measure1D& m) {
  if (std::abs(u.a() - 2.0) > 1e-14) throw Error(ErrorKind::WrongNormalization, "Ricci potential needs a = 2");
  check_measure(u, m);
  const auto& p = u.perturbation();
  const auto dp = p.derivative();
  Momentum1D h{VectorXd(m.size()), false};
  for (int i = 0; i < m.size(); ++i) {
    const double x = m.nodes[i];
    h.values[i] = (2.0 - 2.0 * x) * dp(x) + 2.0 * p(x) + std::log(u.convexity_factor(x));
  }
  return h;
}

double h_entropy(const SymplecticPotential1D& u, const Measure1D& m) {
  const auto h = ricci_potential(u, m);
  const auto [w, shift] = exp_weights(m, h.values);
  const double Z = w.sum();
  return 2.0 * pi * (w.dot(h.values) / Z - std::log(Z) - shift);
}

double w_kappa(const SymplecticPotential1D& u, const Measure1D& m, const Momentum1D& f, double kappa) {
  if (kappa == 0.0 || !std::isfinite(kappa)) throw Error(ErrorKind::InvalidInput, "kappa must be finite and nonzero");
  check_measure(u, m);
  check_size(m, f);
  const auto F = fields(u, m);
  const double a = m.weights.sum();
  auto avg = [&](const VectorXd& v) { return m.weights.dot(v) / a; };
  const VectorXd fc = f.values.array() - avg(f.values);
  const VectorXd df = m.diff * f.values;
  const VectorXd em1 = (kappa * fc).unaryExpr([](double v) { return std::expm1(v); });
  const double E1 = avg(em1);
  const double mass = 1.0 + E1;
  const VectorXd sc = F.s.array() - avg(F.s);
  const VectorXd e = em1.array() + 1.0;
  // W(kappa f) - W(0) at lambda = 1/kappa, term by term.
  const double curvature = -avg(sc.cwiseProduct(em1)) / mass;
  const double gradient = -pi * kappa * kappa * avg(F.g.cwiseProduct(df.cwiseAbs2()).cwiseProduct(e)) / mass;
  const double potential = avg(fc.cwiseProduct(em1)) / mass - std::log1p(E1) / kappa;
  return -(curvature + gradient + potential) / kappa;
}

double w_ext(const SymplecticPotential1D& u, const Measure1D& m, const Momentum1D& f) {
  check_measure(u, m);
  check_size(m, f);
  const double a = m.weights.sum();
  const VectorXd s = scalar_curvature(u, m);
  const VectorXd sh = s.array() - m.weights.dot(s) / a;
  const VectorXd fh = f.values.array() - m.weights.dot(f.values) / a;
  return -0.5 * m.weights.dot((sh - fh).cwiseAbs2()) / a + 0.5 * m.weights.dot(sh.cwiseAbs2()) / a;
}

double calabi(const SymplecticPotential1D& u, const Measure1D& m) {
  check_measure(u, m);
  const double a = m.weights.sum();
  const VectorXd s = scalar_curvature(u, m);
  const VectorXd sh = s.array() - m.weights.dot(s) / a;
  return 0.5 * m.weights.dot(sh.cwiseAbs2()) / a;
}

}  // namespace mulab
