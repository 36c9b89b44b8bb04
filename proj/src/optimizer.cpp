#include "mulab/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "mulab/parallel.hpp"

namespace mulab {

using Eigen::MatrixXd;
using Eigen::VectorXd;

TauMax maximize_over_tau(const ToricTestConfig& tc, double lambda, double tau_max) {
  if (!(tau_max > 0)) throw Error(ErrorKind::InvalidInput, "tau_max must be positive");
  auto f = [&](double t) { return mu_lambda_na(tc, {lambda, t}); };
  const int grid = 256;
  std::vector<double> v(grid + 1);
  for (int i = 0; i <= grid; ++i) v[i] = f(tau_max * i / grid);
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  if (*mx - *mn <= 1e-14 * (1.0 + std::abs(*mx))) return {0.0, v[0]};
  const int best = static_cast<int>(mx - v.begin());
  double a = tau_max * std::max(0, best - 1) / grid;
  double b = tau_max * std::min(grid, best + 1) / grid;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-10) {
    if (fc >= fd) {
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
  TauMax out{0.5 * (a + b), f(0.5 * (a + b))};
  // Endpoints of the bracket may win when the maximum sits on the boundary of [0, tau_max].
  for (double t : {tau_max * std::max(0, best - 1) / grid, tau_max * best / grid}) {
    const double ft = f(t);
    if (ft >= out.value) out = {t, ft};
  }
  if (v[0] >= out.value) out = {0.0, v[0]};
  return out;
}

namespace {

CriticalPoint classify(const LatticePolytope& P, const VectorXd& xi, double lambda) {
  CriticalPoint cp;
  cp.xi = xi;
  cp.value = vector_mu_entropy(P, xi, lambda);
  cp.grad_norm = vector_mu_entropy_gradient(P, xi, lambda).norm();
  cp.hessian = vector_mu_entropy_hessian(P, xi, lambda);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(cp.hessian);
  cp.hessian_min_eig = es.eigenvalues().minCoeff();
  cp.hessian_max_eig = es.eigenvalues().maxCoeff();
  cp.is_local_max = cp.hessian_max_eig < 0;
  return cp;
}

// Newton ascent with eigenvalue modification; returns false when it does not reach |grad| <= 1e-9.
bool newton_ascent(const LatticePolytope& P, double lambda, VectorXd& xi) {
  for (int it = 0; it < 500; ++it) {
    const VectorXd g = vector_mu_entropy_gradient(P, xi, lambda);
    const double gn = g.norm();
    if (gn <= 1e-9) return true;
    const MatrixXd H = vector_mu_entropy_hessian(P, xi, lambda);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(H);
    VectorXd ev = es.eigenvalues();
    const double floor = 1e-8 * (1.0 + ev.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev[i] = -std::max(std::abs(ev[i]), floor);
    const MatrixXd& Q = es.eigenvectors();
    VectorXd p = -Q * (Q.transpose() * g).cwiseQuotient(ev);
    if (p.norm() > 2.0) p *= 2.0 / p.norm();
    const double f0 = vector_mu_entropy(P, xi, lambda);
    double alpha = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
      const VectorXd trial = xi + alpha * p;
      const double f1 = vector_mu_entropy(P, trial, lambda);
      const bool increases = f1 >= f0 + 1e-4 * alpha * g.dot(p);
      // Close to a maximum the value stalls at rounding level; accept steps that shrink the gradient.
      const bool polish = gn < 1e-5 && vector_mu_entropy_gradient(P, trial, lambda).norm() < gn;
      if (increases || polish) {
        xi = trial;
        moved = true;
        break;
      }
    }
    if (!moved) return vector_mu_entropy_gradient(P, xi, lambda).norm() <= 1e-9;
  }
  return vector_mu_entropy_gradient(P, xi, lambda).norm() <= 1e-9;
}

double extent(const LatticePolytope& P) {
  double e = 0.0;
  for (const auto& a : P.vertices())
    for (const auto& b : P.vertices()) e = std::max(e, (vec_cast<double>(a) - vec_cast<double>(b)).norm());
  return e;
}

}  // namespace

XiSearch maximize_over_xi(const LatticePolytope& P, double lambda, int multistart, std::uint64_t seed) {
  if (multistart < 1) throw Error(ErrorKind::InvalidInput, "multistart must be at least 1");
  const int n = P.dim();
  std::mt19937_64 gen(seed);
  const double R = 12.0 / extent(P);
  std::vector<VectorXd> starts = {VectorXd::Zero(n)};
  for (int i = 0; i < n; ++i)
    for (double sgn : {1.0, -1.0}) starts.push_back(0.5 * sgn * R * VectorXd::Unit(n, i));
  for (int s = 0; s < multistart; ++s) {
    VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = R * (2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0);
    starts.push_back(x);
  }
  std::vector<VectorXd> ends(starts.size());
  std::vector<char> ok(starts.size());
  parallel_for(static_cast<int>(starts.size()), [&](int i) {
    VectorXd x = starts[i];
    ok[i] = newton_ascent(P, lambda, x);
    ends[i] = x;
  });
  XiSearch out;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (!ok[i]) {
      ++out.nonconverged_starts;
      continue;
    }
    const bool dup = std::any_of(out.points.begin(), out.points.end(), [&](const CriticalPoint& c) {
      return (c.xi - ends[i]).norm() <= 1e-6 * (1.0 + ends[i].norm());
    });
    if (!dup) out.points.push_back(classify(P, ends[i], lambda));
  }
  std::sort(out.points.begin(), out.points.end(),
            [](const CriticalPoint& a, const CriticalPoint& b) { return a.value > b.value; });
  return out;
}

double zero_top_eigenvalue(const LatticePolytope& P, double lambda) {
  const MatrixXd H = vector_mu_entropy_hessian(P, VectorXd::Zero(P.dim()), lambda);
  return Eigen::SelfAdjointEigenSolver<MatrixXd>(H).eigenvalues().maxCoeff();
}

ScanResult bifurcation_scan(const LatticePolytope& P, double lambda_lo, double lambda_hi, int steps, int multistart,
                            std::uint64_t seed) {
  if (!(lambda_lo < lambda_hi)) throw Error(ErrorKind::InvalidInput, "lambda_lo must be below lambda_hi");
  if (steps < 1) throw Error(ErrorKind::InvalidInput, "steps must be positive");
  ScanResult r;
  const int n = P.dim();
  r.zero_is_critical = vector_mu_entropy_gradient(P, VectorXd::Zero(n), 0.0).norm() <= 1e-9;
  for (int k = 0; k <= steps; ++k) r.lambda_grid.push_back(lambda_lo + (lambda_hi - lambda_lo) * k / steps);
  r.points.resize(r.lambda_grid.size());
  parallel_for(static_cast<int>(r.lambda_grid.size()), [&](int k) {
    const double lambda = r.lambda_grid[k];
    ScanPoint sp;
    sp.lambda = lambda;
    for (auto& c : maximize_over_xi(P, lambda, multistart, seed + static_cast<std::uint64_t>(k)).points)
      if (c.is_local_max) sp.maxima.push_back(std::move(c));
    const MatrixXd H = vector_mu_entropy_hessian(P, VectorXd::Zero(n), lambda);
    const VectorXd ev = Eigen::SelfAdjointEigenSolver<MatrixXd>(H).eigenvalues();
    sp.zero_min_eig = ev.minCoeff();
    sp.zero_max_eig = ev.maxCoeff();
    r.points[k] = std::move(sp);
  });
  for (std::size_t k = 0; k + 1 < r.points.size(); ++k) {
    const double e0 = r.points[k].zero_max_eig, e1 = r.points[k + 1].zero_max_eig;
    if (e0 == 0.0) {
      r.transitions.push_back(r.points[k].lambda);
      continue;
    }
    if ((e0 < 0) == (e1 < 0) || e1 == 0.0) continue;
    double a = r.points[k].lambda, b = r.points[k + 1].lambda;
    const bool neg_at_a = e0 < 0;
    while (b - a > 1e-8) {
      const double m = 0.5 * (a + b);
      if ((zero_top_eigenvalue(P, m) < 0) == neg_at_a) a = m;
      else b = m;
    }
    r.transitions.push_back(0.5 * (a + b));
  }
  if (!r.points.empty() && r.points.back().zero_max_eig == 0.0) r.transitions.push_back(r.points.back().lambda);
  return r;
}

namespace {

struct Decoded {
  PLConvexFunction q;
  double tau;
};

Decoded decode(const VectorXd& x, int n, int k, const LatticePolytope& P) {
  std::vector<AffinePiece> pieces;
  for (int i = 0; i < k; ++i) pieces.push_back({x.segment(i * (n + 1), n), x[i * (n + 1) + n]});
  return {PLConvexFunction(pieces).normalized_on(P), std::abs(x[k * (n + 1)])};
}

}  // namespace

DegenerationSearchResult optimal_degeneration_search(const LatticePolytope& P, double lambda, int n_pieces, int restarts,
                                                     std::uint64_t seed) {
  if (n_pieces < 1) throw Error(ErrorKind::InvalidInput, "n_pieces must be at least 1");
  const int n = P.dim(), k = n_pieces, dim = k * (n + 1) + 1;
  std::vector<VectorXd> vertices;
  for (const auto& v : P.vertices()) vertices.push_back(vec_cast<double>(v));

  auto objective = [&](const VectorXd& x) -> double {
    if (!x.allFinite()) return -1e12;
    const auto d = decode(x, n, k, P);
    // q >= its first piece, so the first piece bounds the exponent range from below.
    double lowest = 0.0;
    for (const auto& v : vertices) lowest = std::min(lowest, d.q.pieces()[0](v));
    const double range = d.tau * -lowest;
    if (range > 650.0) return -1e9 * (1.0 + range);
    try {
      return mu_lambda_na(ToricTestConfig(P, d.q), {lambda, d.tau});
    } catch (const Error&) {
      return -1e12;
    }
  };

  std::vector<VectorXd> starts;
  starts.push_back(VectorXd::Zero(dim));
  const auto xs = maximize_over_xi(P, lambda, 4, seed);
  for (const auto& c : xs.points) {
    if (!c.is_local_max) continue;
    VectorXd x = VectorXd::Zero(dim);
    for (int i = 0; i < k; ++i) {
      x.segment(i * (n + 1), n) = c.xi;
      x[i * (n + 1) + n] = i == 0 ? 0.0 : -1.0;
    }
    x[dim - 1] = 1.0;
    starts.push_back(x);
    break;
  }
  std::mt19937_64 gen(seed);
  auto u = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  for (int r = 0; r < restarts; ++r) {
    VectorXd x(dim);
    for (int i = 0; i < dim - 1; ++i) x[i] = 4.0 * u() - 2.0;
    x[dim - 1] = 3.0 * u();
    starts.push_back(x);
  }

  std::vector<NelderMeadResult> runs(starts.size());
  std::vector<double> start_values(starts.size());
  parallel_for(static_cast<int>(starts.size()), [&](int i) {
    start_values[i] = objective(starts[i]);
    runs[i] = nelder_mead_maximize(objective, starts[i], 0.5, 400 * dim);
  });
  DegenerationSearchResult best;
  best.value = -std::numeric_limits<double>::infinity();
  int total = 0;
  VectorXd best_x;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    total += runs[i].iterations;
    // Nelder-Mead keeps its best vertex, but the starting point itself is also feasible.
    if (start_values[i] > best.value && start_values[i] >= runs[i].value) {
      best.value = start_values[i];
      best.converged = runs[i].converged;
      best_x = starts[i];
    }
    if (runs[i].value > best.value) {
      best.value = runs[i].value;
      best.converged = runs[i].converged;
      best_x = runs[i].x;
    }
  }
  const auto d = decode(best_x, n, k, P);
  best.q = d.q;
  best.tau = d.tau;
  best.iterations = total;
  return best;
}

}  // namespace mulab
