#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mulab/polytope.hpp"

namespace mulab {

/// mu -> <gradient, mu> + constant.
struct AffinePiece {
  Eigen::VectorXd gradient;
  double constant = 0.0;

  double operator()(const Eigen::VectorXd& mu) const { return gradient.dot(mu) + constant; }
};

/// Maximum of finitely many affine pieces.
class PLConvexFunction {
 public:
  PLConvexFunction() = default;
  explicit PLConvexFunction(std::vector<AffinePiece> pieces);

  static PLConvexFunction constant(int dim, double c);
  static PLConvexFunction affine(const Eigen::VectorXd& gradient, double c);

  int dim() const { return static_cast<int>(pieces_.front().gradient.size()); }
  const std::vector<AffinePiece>& pieces() const { return pieces_; }

  double operator()(const Eigen::VectorXd& mu) const;
  /// Index of the first piece attaining the maximum.
  int active_piece(const Eigen::VectorXd& mu) const;

  PLConvexFunction scaled(double d) const;
  PLConvexFunction shifted(double c) const;

  /// Maximum of q over the vertices of P (the maximum over P, by convexity).
  double max_on(const LatticePolytope& P) const;
  /// Shifts q so that its maximum over P is zero.
  PLConvexFunction normalized_on(const LatticePolytope& P) const;

 private:
  std::vector<AffinePiece> pieces_;
};

/// Region of P on which `piece` attains the maximum.
struct Cell {
  int piece;
  Polytope<double> region;
  std::vector<Simplex<double>> simplices;
};

/// Part of the boundary of P on which `piece` attains the maximum, carrying the lattice measure.
struct BoundaryPiece {
  int piece;
  Simplex<double> simplex;
};

/// Subdivision of P induced by q, refined on the boundary.
struct Subdivision {
  int dim = 0;
  std::vector<Cell> cells;
  std::vector<BoundaryPiece> boundary;
};

Subdivision subdivide(const LatticePolytope& P, const PLConvexFunction& q);

/// Integral of e^l over S for the affine l interpolating `values` at the vertices.
double exp_integral_simplex(const Simplex<double>& S, const Eigen::VectorXd& values);

/// Barycentric moments of e^(l - shift) over S: m0 = int e, m1[i] = int lambda_i e,
/// m2(i, j) = int lambda_i lambda_j e. `order` selects how many are filled.
struct SimplexMoments {
  double m0 = 0.0;
  Eigen::VectorXd m1;
  Eigen::MatrixXd m2;
};

SimplexMoments simplex_moments(const Simplex<double>& S, const Eigen::VectorXd& values, int order, double shift = 0.0);

struct IntegralBundle {
  double I0 = 0.0;  // int_P e^(tau q) dmu
  double I1 = 0.0;  // int_P tau q e^(tau q) dmu
  double B0 = 0.0;  // int_dP e^(tau q) dsigma
  Eigen::VectorXd moment;  // int_P mu e^(tau q) dmu
};

IntegralBundle bundle(const LatticePolytope& P, const PLConvexFunction& q, double tau);
IntegralBundle bundle(const Subdivision& sub, const PLConvexFunction& q, double tau);

/// Weighted integrals against w = e^(<xi, mu> - shift), where shift is the maximum of <xi, mu> on P.
///   J0 = int w, J1 = int mu w, J2 = int mu mu^T w, K0 = int_dP w dsigma, K1 = int_dP mu w dsigma.
/// `q_*` entries are the same integrals with an extra factor q (cellwise affine), when a
/// subdivision is supplied.
struct WeightedMoments {
  double shift = 0.0;
  double J0 = 0.0;
  Eigen::VectorXd J1;
  Eigen::MatrixXd J2;
  double K0 = 0.0;
  Eigen::VectorXd K1;
  double qJ0 = 0.0;         // int q w
  Eigen::VectorXd qJ1;      // int mu q w
  double qK0 = 0.0;         // int_dP q w dsigma
};

WeightedMoments weighted_moments(const LatticePolytope& P, const Eigen::VectorXd& xi);
WeightedMoments weighted_moments(const Subdivision& sub, const PLConvexFunction& q, const Eigen::VectorXd& xi);

/// Monte-Carlo estimate with standard errors.
struct BundleEstimate {
  IntegralBundle value;
  double se_I0 = 0.0;
  double se_I1 = 0.0;
  double se_B0 = 0.0;
};

/// Rejection sampling in the bounding box for the interior integrals and uniform sampling on
/// each facet (weighted by its lattice length) for the boundary integral. Deterministic in `seed`.
BundleEstimate mc_oracle(const LatticePolytope& P, const PLConvexFunction& q, double tau, std::int64_t samples,
                         std::uint64_t seed);

}  // namespace mulab
