#include <doctest.h>

#include "mulab/polytope.hpp"
#include "test_support.hpp"

using namespace mulab;
using namespace testing;

namespace {

// Counts interior and boundary lattice points by testing the original halfspaces.
void count_lattice_points(const LatticePolytope& P, long& interior, long& boundary) {
  interior = boundary = 0;
  for (long x = -20; x <= 20; ++x) {
    for (long y = -20; y <= 20; ++y) {
      const QVec p = qv({x, y});
      bool inside = true, on = false;
      for (const auto& f : P.facets()) {
        const Rational s = f.normal.dot(p);
        if (s > f.offset) inside = false;
        if (s == f.offset) on = true;
      }
      if (!inside) continue;
      (on ? boundary : interior)++;
    }
  }
}

// Point-in-convex-polygon from the vertex list alone (counter-clockwise).
bool in_vertex_hull(const std::vector<Eigen::VectorXd>& V, const Eigen::VectorXd& p) {
  for (std::size_t i = 0; i < V.size(); ++i) {
    const auto& a = V[i];
    const auto& b = V[(i + 1) % V.size()];
    if ((b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) < 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("interval from halfspaces") {
  const auto P = interval(1);
  CHECK(P.dim() == 1);
  CHECK(P.vertices().size() == 2);
  CHECK(P.vertices()[0][0] == 0);
  CHECK(P.vertices()[1][0] == 1);
  CHECK(P.facets().size() == 2);
  CHECK(volume(P) == 1);
  const auto T = triangulate(P);
  REQUIRE(T.size() == 1);
  CHECK(T[0].measure == 1);
}

TEST_CASE("unit square and standard triangle") {
  const auto S = unit_square();
  CHECK(S.vertices().size() == 4);
  CHECK(S.facets().size() == 4);
  CHECK(volume(S) == 1);
  const auto T = triangulate(S);
  REQUIRE(T.size() == 2);
  CHECK(T[0].measure == Rational(1, 2));
  CHECK(T[1].measure == Rational(1, 2));

  const auto D = lattice_polytope_from_halfspaces({qv({-1, 0}), qv({0, -1}), qv({1, 1})}, {0, 0, 1});
  REQUIRE(D.vertices().size() == 3);
  CHECK(volume(D) == Rational(1, 2));
  std::vector<QVec> expect = {qv({0, 0}), qv({1, 0}), qv({0, 1})};
  for (const auto& e : expect) {
    bool found = false;
    for (const auto& v : D.vertices()) found = found || v == e;
    CHECK(found);
  }
}

TEST_CASE("constructor errors") {
  CHECK_THROWS_AS(lattice_polytope_from_halfspaces({qv({-1, 0}), qv({0, -1})}, {0, 0}), Error);
  try {
    lattice_polytope_from_halfspaces({qv({-1, 0}), qv({0, -1})}, {0, 0});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnboundedRegion);
  }
  try {
    lattice_polytope_from_halfspaces({qv({-1}), qv({1})}, {-2, 1});
    FAIL("expected EmptyRegion");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyRegion);
  }
  try {
    lattice_polytope_from_halfspaces({qv({-1, 0}), qv({0, -1}), qv({2, 2})}, {0, 0, 2});
    FAIL("expected NonPrimitiveNormal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPrimitiveNormal);
  }
  try {
    lattice_polytope_from_halfspaces({qv({-1, 0}), qv({0, -1}), qv({1, 1})}, {0, 0, 0});
    FAIL("expected EmptyRegion");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyRegion);
  }
}

TEST_CASE("redundant halfspaces are dropped") {
  const auto P = lattice_polytope_from_halfspaces({qv({-1, 0}), qv({0, -1}), qv({1, 0}), qv({0, 1}), qv({1, 1})},
                                                  {0, 0, 1, 1, 5});
  CHECK(P.facets().size() == 4);
  CHECK(volume(P) == 1);
}

TEST_CASE("boundary mass") {
  CHECK(boundary_mass(interval(7)) == 2);
  CHECK(boundary_mass(unit_square()) == 4);
  CHECK(boundary_mass(lattice_triangle(2)) == 6);
  CHECK(self_intersection(unit_square()) == 2);
  CHECK(canonical_degree(unit_square()) == -4);
  CHECK(canonical_degree(interval(3)) == -2);
  CHECK(has_primitive_normals(lattice_triangle(2)));
}

TEST_CASE("random lattice polygons: triangulation, Pick and cross-representation") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto P = random_lattice_polygon(gen);
    Rational sum = 0;
    for (const auto& s : triangulate(P)) sum += s.measure;
    CHECK(sum == volume(P));

    long I = 0, B = 0;
    count_lattice_points(P, I, B);
    CHECK(volume(P) == Rational(I) + Rational(B, 2) - 1);
    CHECK(boundary_mass(P) == B);
    CHECK(has_primitive_normals(P));

    // Rebuild from the facet description and compare with the original vertex description.
    std::vector<QVec> normals;
    std::vector<Rational> offsets;
    for (const auto& f : P.facets()) {
      normals.push_back(f.normal);
      offsets.push_back(f.offset);
    }
    const auto H = lattice_polytope_from_halfspaces(normals, offsets);
    CHECK(H.vertices() == P.vertices());

    std::vector<Eigen::VectorXd> V;
    for (const auto& v : P.vertices()) V.push_back(vec_cast<double>(v));
    int disagreements = 0;
    for (int k = 0; k < 1000; ++k) {
      const Eigen::VectorXd p = dv({uniform(gen, -6, 6), uniform(gen, -6, 6)});
      if (H.cast<double>().contains(p) != in_vertex_hull(V, p)) ++disagreements;
    }
    CHECK(disagreements == 0);

    for (const auto& f : P.facets())
      for (const auto& v : P.vertices()) CHECK(f.normal.dot(v) <= f.offset);
  }
}

TEST_CASE("double polytope from clipped vertices") {
  const auto P = Polytope<double>::from_vertices({dv({0, 0}), dv({1, 0}), dv({1, 1}), dv({0, 1}), dv({0.5, 0.5}), dv({0.5, 0})});
  CHECK(P.vertices().size() == 4);
  CHECK(P.volume() == doctest::Approx(1.0));
}
