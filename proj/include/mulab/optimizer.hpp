#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mulab/na_entropy.hpp"

namespace mulab {

struct TauMax {
  double tau;
  double value;
};

/// Global maximum of tau -> mu_lambda_na(tc, tau) on [0, tau_max]: 256-point grid, then golden
/// section around the best grid point. Ties go to tau = 0.
TauMax maximize_over_tau(const ToricTestConfig& tc, double lambda, double tau_max);

struct CriticalPoint {
  Eigen::VectorXd xi;
  double value = 0.0;
  Eigen::MatrixXd hessian;
  double hessian_min_eig = 0.0;
  double hessian_max_eig = 0.0;
  double grad_norm = 0.0;
  bool is_local_max = false;
};

struct XiSearch {
  std::vector<CriticalPoint> points;  // sorted by decreasing value
  int nonconverged_starts = 0;
};

/// Newton ascent with eigenvalue-modified FD Hessian from xi = 0, the points +-R/2 e_i, and
/// `multistart` seeded random starts in the box of radius R = 12 / diam(P).
/// Returns deduplicated critical points with |grad| <= 1e-9, classified by the Hessian.
XiSearch maximize_over_xi(const LatticePolytope& P, double lambda, int multistart, std::uint64_t seed);

struct ScanPoint {
  double lambda;
  std::vector<CriticalPoint> maxima;
  double zero_min_eig;
  double zero_max_eig;
};

struct ScanResult {
  std::vector<double> lambda_grid;
  std::vector<ScanPoint> points;
  /// Values of lambda where the largest Hessian eigenvalue at xi = 0 changes sign, bisected to 1e-8.
  std::vector<double> transitions;
  /// False when xi = 0 is not critical (asymmetric P); transitions are then not meaningful.
  bool zero_is_critical = true;
};

ScanResult bifurcation_scan(const LatticePolytope& P, double lambda_lo, double lambda_hi, int steps,
                            int multistart = 4, std::uint64_t seed = 1);

/// Largest eigenvalue of the FD Hessian of the vector entropy at xi = 0.
double zero_top_eigenvalue(const LatticePolytope& P, double lambda);

struct DegenerationSearchResult {
  PLConvexFunction q;
  double tau = 0.0;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead over piece coefficients and tau, q renormalized to max 0 on P, restarted from
/// the trivial configuration, the best product configuration, and `restarts` random points.
DegenerationSearchResult optimal_degeneration_search(const LatticePolytope& P, double lambda, int n_pieces, int restarts,
                                                     std::uint64_t seed);

/// Derivative-free maximization used by the search above; exposed for testing.
struct NelderMeadResult {
  Eigen::VectorXd x;
  double value;
  int iterations;
  bool converged;
};

template <class F>
NelderMeadResult nelder_mead_maximize(F&& f, const Eigen::VectorXd& x0, double step, int max_iter, double ftol = 1e-13);

}  // namespace mulab

#include "mulab/nelder_mead.ipp"
