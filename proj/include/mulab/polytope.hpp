#pragma once

#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include "mulab/errors.hpp"

namespace mulab {

using Rational = boost::multiprecision::mpq_rational;

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using QVec = Vec<Rational>;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(double x) { return x; }

template <class To, class From>
To scalar_cast(const From& x) {
  if constexpr (std::is_same_v<To, double>) {
    return to_double(x);
  } else {
    return To(x);
  }
}

template <class To, class From>
Vec<To> vec_cast(const Vec<From>& v) {
  Vec<To> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = scalar_cast<To>(v[i]);
  return out;
}

/// A facet lies in the hyperplane <normal, mu> = offset; the polytope is on the side <= offset.
template <class Scalar>
struct Facet {
  Vec<Scalar> normal;
  Scalar offset;
  std::vector<Vec<Scalar>> vertices;
};

/// A simplex carrying a constant multiple of Lebesgue measure. `measure` is the total mass,
/// i.e. weight times the Euclidean volume of the simplex in its own affine hull.
template <class Scalar>
struct Simplex {
  std::vector<Vec<Scalar>> vertices;
  Scalar measure;

  int dim() const { return static_cast<int>(vertices.size()) - 1; }
};

/// Bounded full-dimensional convex polytope carrying both representations.
///
/// Vertices of 2-dimensional polytopes are stored counter-clockwise and facet `i` joins
/// vertex `i` to vertex `i + 1`. In dimension 1 the vertices are sorted increasingly.
/// Only dimensions 1 and 2 are supported by the constructors.
template <class Scalar>
class Polytope {
 public:
  using Point = Vec<Scalar>;

  Polytope() = default;

  static Polytope from_halfspaces(const std::vector<Point>& normals, const std::vector<Scalar>& offsets);
  static Polytope from_vertices(const std::vector<Point>& points);

  int dim() const { return dim_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Facet<Scalar>>& facets() const { return facets_; }
  const Scalar& volume() const { return volume_; }

  /// Closed membership; exact for rationals, with a relative tolerance for doubles.
  bool contains(const Point& p) const;

  Point centroid_of_vertices() const;

  template <class To>
  Polytope<To> cast() const {
    Polytope<To> out;
    out.dim_ = dim_;
    for (const auto& v : vertices_) out.vertices_.push_back(vec_cast<To>(v));
    for (const auto& f : facets_) {
      Facet<To> g;
      g.normal = vec_cast<To>(f.normal);
      g.offset = scalar_cast<To>(f.offset);
      for (const auto& v : f.vertices) g.vertices.push_back(vec_cast<To>(v));
      out.facets_.push_back(std::move(g));
    }
    out.volume_ = scalar_cast<To>(volume_);
    return out;
  }

 private:
  template <class>
  friend class Polytope;

  static Polytope from_ordered_vertices(std::vector<Point> ordered, int dim);

  int dim_ = 0;
  std::vector<Point> vertices_;
  std::vector<Facet<Scalar>> facets_;
  Scalar volume_{};
};

using LatticePolytope = Polytope<Rational>;

/// Builds a lattice polytope from halfspaces <normal, mu> <= offset with primitive integer normals.
LatticePolytope lattice_polytope_from_halfspaces(const std::vector<QVec>& normals,
                                                 const std::vector<Rational>& offsets);

/// Builds a lattice polytope as the convex hull of rational points; facet normals are made
/// primitive integer vectors.
LatticePolytope lattice_polytope_from_vertices(const std::vector<QVec>& points);

/// True when every facet normal is a primitive integer vector.
bool has_primitive_normals(const LatticePolytope& P);

/// Scales a nonzero rational vector to the primitive integer vector on the same ray.
QVec primitive_integer_vector(const QVec& v);

/// Simplices with disjoint interiors covering P, each carrying Lebesgue measure.
template <class Scalar>
std::vector<Simplex<Scalar>> triangulate(const Polytope<Scalar>& P);

/// (dim-1)-simplices covering the boundary, weighted by the lattice boundary measure:
/// on a facet with primitive normal the measure gives a fundamental cell of the facet's
/// lattice mass 1; in dimension 1 it is the counting measure on the two endpoints.
std::vector<Simplex<Rational>> boundary_simplices(const LatticePolytope& P);

/// Exact Lebesgue volume.
inline Rational volume(const LatticePolytope& P) { return P.volume(); }

/// Total lattice boundary mass; equals the number of boundary lattice points of a lattice polygon.
Rational boundary_mass(const LatticePolytope& P);

/// Self-intersection (L^n) = n! vol(P).
Rational self_intersection(const LatticePolytope& P);

/// Canonical degree (K_X . L^{n-1}) = -(n-1)! * boundary mass.
Rational canonical_degree(const LatticePolytope& P);

template <class Scalar>
Scalar simplex_volume(const std::vector<Vec<Scalar>>& vertices);

}  // namespace mulab
