#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mulab/errors.hpp"
#include "mulab/exp_integrals.hpp"
#include "mulab/polytope.hpp"
#include "mulab/toric_metric.hpp"

/// Seeded generators for the random input families used by the property and acceptance suites.
namespace mulab::samplers {

inline double uniform(std::mt19937_64& gen, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(gen);
}

/// Random lattice polygon: hull of random integer points in [-r, r]^2, retried until full-dimensional.
inline LatticePolytope random_lattice_polygon(std::mt19937_64& gen, int r = 5, int npts = 7) {
  std::uniform_int_distribution<int> d(-r, r);
  for (;;) {
    std::vector<QVec> pts;
    for (int i = 0; i < npts; ++i) {
      QVec v(2);
      v << Rational(d(gen)), Rational(d(gen));
      pts.push_back(v);
    }
    try {
      return lattice_polytope_from_vertices(pts);
    } catch (const Error&) {
    }
  }
}

/// Random PL convex function with `k` pieces, normalized to max 0 on P.
inline PLConvexFunction random_pl(std::mt19937_64& gen, const LatticePolytope& P, int k, double slope) {
  std::vector<AffinePiece> pieces;
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd g(P.dim());
    for (int j = 0; j < P.dim(); ++j) g[j] = uniform(gen, -slope, slope);
    pieces.push_back({g, uniform(gen, -slope, slope)});
  }
  return PLConvexFunction(pieces).normalized_on(P);
}

/// Convex PL function on [0, a] with `k` kinks in (0.1 a, 0.9 a), normalized to max 0.
inline PLConvexFunction random_kinked_pl(std::mt19937_64& gen, double a, int k, double slope) {
  std::vector<double> kinks;
  for (int i = 0; i < k; ++i) kinks.push_back(uniform(gen, 0.1 * a, 0.9 * a));
  std::sort(kinks.begin(), kinks.end());
  double s = uniform(gen, -slope, 0.0), c = 0.0;
  std::vector<AffinePiece> pieces = {{Eigen::VectorXd::Constant(1, s), c}};
  for (double x : kinks) {
    const double s2 = s + uniform(gen, 0.2, 1.0) * slope;
    c += (s - s2) * x;
    s = s2;
    pieces.push_back({Eigen::VectorXd::Constant(1, s), c});
  }
  double mx = -1e300;
  for (const auto& p : pieces) mx = std::max({mx, p.constant, p.constant + p.gradient[0] * a});
  for (auto& p : pieces) p.constant -= mx;
  return PLConvexFunction(pieces);
}

/// Random smooth perturbation of the Guillemin potential on [0, a], halved until 2x(a - x) u'' >= a / 2.
inline SymplecticPotential1D random_potential(std::mt19937_64& gen, double a, double amp = 0.05, int terms = 8) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(terms + 1);
  for (int k = 2; k <= terms; ++k) c[k] = uniform(gen, -amp, amp) * a * a / (k * k * k);
  for (;;) {
    try {
      SymplecticPotential1D u(a, c);
      bool ok = true;
      for (int i = 0; i <= 400; ++i) ok = ok && u.convexity_factor(a * i / 400.0) >= 0.5 * a;
      if (ok) return u;
    } catch (const Error&) {
    }
    c *= 0.5;
  }
}

/// Random smooth function on the nodes of m: a short Chebyshev series.
inline Momentum1D random_momentum(std::mt19937_64& gen, const Measure1D& m, double amp = 1.0,
                                         int terms = 6) {
  Eigen::VectorXd c(terms);
  for (int k = 0; k < terms; ++k) c[k] = uniform(gen, -amp, amp) / (1 + k);
  return momentum_from(m, ChebyshevSeries(m.a, c));
}

}  // namespace mulab::samplers
