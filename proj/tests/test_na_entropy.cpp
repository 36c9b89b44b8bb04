#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mulab/na_entropy.hpp"
#include "test_support.hpp"

using namespace mulab;
using namespace testing;
using Eigen::VectorXd;
using std::numbers::pi;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

ToricTestConfig tc_of(const LatticePolytope& P, const PLConvexFunction& q) { return ToricTestConfig(P, q); }

// The toric functional with exponent <xi, mu> + tau q, tau of either sign, assembled cell by cell.
double functional(const LatticePolytope& P, const VectorXd& xi, const PLConvexFunction& q, double lambda, double tau) {
  const auto sub = subdivide(P, q);
  double I = 0, J = 0, B = 0;
  auto values = [&](const Simplex<double>& S, const AffinePiece& p) {
    VectorXd v(S.vertices.size());
    for (std::size_t i = 0; i < S.vertices.size(); ++i) v[i] = xi.dot(S.vertices[i]) + tau * p(S.vertices[i]);
    return v;
  };
  for (const auto& c : sub.cells) {
    for (const auto& S : c.simplices) {
      const VectorXd v = values(S, q.pieces()[c.piece]);
      const auto m = simplex_moments(S, v, 1);
      I += m.m0;
      J += v.dot(m.m1);
    }
  }
  for (const auto& b : sub.boundary) B += exp_integral_simplex(b.simplex, values(b.simplex, q.pieces()[b.piece]));
  return -2 * pi * B / I + lambda * (P.dim() + J / I - std::log(I));
}

double vector_oracle_interval(double s, double lambda) {
  const double I = (std::exp(s) - 1) / s;
  const double T = std::exp(s) / s - (std::exp(s) - 1) / (s * s);
  return -2 * pi * (1 + std::exp(s)) / I + lambda * (1 + s * T / I - std::log(I));
}

}  // namespace

TEST_CASE("mu at tau = 0") {
  std::mt19937_64 gen(1);
  const auto P = interval(1);
  const auto q = random_pl(gen, P, 3, 3.0);
  CHECK(check_mu_na(tc_of(P, q), 0.0) == doctest::Approx(-4 * pi).epsilon(1e-15));
  for (int a : {1, 2, 5}) {
    const auto Pa = interval(a);
    CHECK(check_mu_na(tc_of(Pa, PLConvexFunction::constant(1, 0)), 3.0) == doctest::Approx(-4 * pi / a).epsilon(1e-14));
    // 2 pi (K . L^{n-1}) / (L^n)
    const double closed = 2 * pi * to_double(canonical_degree(Pa)) / to_double(self_intersection(Pa));
    CHECK(check_mu_na(tc_of(Pa, PLConvexFunction::constant(1, 0)), 0.0) == doctest::Approx(closed).epsilon(1e-14));
  }
  CHECK(check_mu_na(tc_of(unit_square(), PLConvexFunction::constant(2, 0)), 0.0) == doctest::Approx(-8 * pi).epsilon(1e-14));
}

TEST_CASE("sigma") {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto P = random_lattice_polygon(gen);
    const auto q = random_pl(gen, P, 3, 2.0);
    CHECK(check_sigma(tc_of(P, q), 0.0) == doctest::Approx(2 - std::log(to_double(volume(P)))).epsilon(1e-13));
  }
  const double e1 = std::exp(-1.0);
  const double I0 = 1 - e1, I1 = -1 + 2 * e1;
  const auto tc = tc_of(interval(1), PLConvexFunction::affine(dv({1}), -1));
  CHECK(check_sigma(tc, 1.0) == doctest::Approx((I0 + I1) / I0 - std::log(I0)).epsilon(1e-13));
}

TEST_CASE("sigma is invariant under lattice translation with the compensating shift") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto P = random_lattice_polygon(gen);
    const auto q = random_pl(gen, P, 3, 2.0);
    const QVec shift = qv({3, -2});
    std::vector<QVec> moved;
    for (const auto& v : P.vertices()) moved.push_back(v + shift);
    const auto Pt = lattice_polytope_from_vertices(moved);
    std::vector<AffinePiece> pieces;
    for (const auto& p : q.pieces()) pieces.push_back({p.gradient, p.constant - p.gradient.dot(vec_cast<double>(shift))});
    const double tau = uniform(gen, 0, 4);
    CHECK(check_sigma(tc_of(Pt, PLConvexFunction(pieces)), tau) == doctest::Approx(check_sigma(tc_of(P, q), tau)).epsilon(1e-11));
  }
}

TEST_CASE("mu-lambda and the base-change law") {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto P = trial % 2 ? random_lattice_polygon(gen) : interval(1 + trial % 4);
    const auto q = random_pl(gen, P, 3, 1.0);
    const double lambda = uniform(gen, -10, 2), tau = uniform(gen, 0, 3);
    const auto tc = tc_of(P, q);
    const auto e = na_entropy(tc, {lambda, tau});
    CHECK(e.mu_lambda == doctest::Approx(check_mu_na(tc, tau) + lambda * check_sigma(tc, tau)));
    CHECK(mu_lambda_na(tc, {0.0, tau}) == doctest::Approx(check_mu_na(tc, tau)));
    for (int d = 2; d <= 4; ++d) {
      const double lhs = mu_lambda_na(tc, {lambda, d * tau});
      const double rhs = mu_lambda_na(tc_of(P, q.scaled(d)), {lambda, tau});
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1 + std::abs(lhs)));
    }
    const double n = P.dim(), vol = to_double(volume(P));
    CHECK(mu_lambda_na(tc, {lambda, 0.0}) ==
          doctest::Approx(-2 * pi * to_double(boundary_mass(P)) / vol + lambda * (n - std::log(vol))).epsilon(1e-13));
  }
}

TEST_CASE("q must be nonpositive on P") {
  CHECK_THROWS_AS(ToricTestConfig(interval(1), PLConvexFunction::affine(dv({1}), 0.0)), Error);
}

TEST_CASE("vector mu-entropy") {
  for (double lambda : {0.0, -1.0, -10.0, 3.0}) {
    CHECK(vector_mu_entropy(interval(1), dv({0}), lambda) == doctest::Approx(-4 * pi + lambda).epsilon(1e-14));
    for (double s : {-7.0, -0.3, 0.9, 4.0, 30.0}) {
      CHECK(vector_mu_entropy(interval(1), dv({s}), lambda) == doctest::Approx(vector_oracle_interval(s, lambda)).epsilon(1e-12));
    }
    CHECK(vector_mu_entropy(interval(1), dv({1e-6}), lambda) == doctest::Approx(-4 * pi + lambda).epsilon(1e-6));
  }
  // Large xi stays finite through the exponent shift.
  CHECK(std::isfinite(vector_mu_entropy(interval(1), dv({2000}), -1.0)));

  std::mt19937_64 gen(5);
  const auto S = unit_square();
  for (int trial = 0; trial < 10; ++trial) {
    const VectorXd xi = dv({uniform(gen, -5, 5), uniform(gen, -5, 5)});
    const double lambda = uniform(gen, -10, 10);
    CHECK(vector_mu_entropy(S, xi, lambda) == doctest::Approx(vector_mu_entropy(S, -xi, lambda)).epsilon(1e-12));
  }
}

TEST_CASE("vector entropy at rational multiples equals the test-configuration formula") {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto P = random_lattice_polygon(gen, 3);
    const VectorXd xi0 = dv({static_cast<double>(trial % 3 - 1), static_cast<double>(trial % 4 - 2)});
    if (xi0.isZero()) continue;
    const double tau = (trial + 1) / 7.0;
    const double lambda = uniform(gen, -5, 5);
    const auto q = PLConvexFunction::affine(xi0, 0.0).normalized_on(P);
    CHECK(vector_mu_entropy(P, tau * xi0, lambda) == doctest::Approx(mu_lambda_na(tc_of(P, q), {lambda, tau})).epsilon(1e-12));
  }
}

TEST_CASE("analytic gradient against central differences") {
  std::mt19937_64 gen(7);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto P = trial % 2 ? random_lattice_polygon(gen, 3) : interval(1 + trial % 3);
    VectorXd xi(P.dim());
    for (int i = 0; i < P.dim(); ++i) xi[i] = uniform(gen, -4, 4);
    const double lambda = uniform(gen, -30, 30);
    const VectorXd g = vector_mu_entropy_gradient(P, xi, lambda);
    for (int i = 0; i < P.dim(); ++i) {
      VectorXd xp = xi, xm = xi;
      xp[i] += 1e-6;
      xm[i] -= 1e-6;
      const double fd = (vector_mu_entropy(P, xp, lambda) - vector_mu_entropy(P, xm, lambda)) / 2e-6;
      worst = std::max(worst, std::abs(g[i] - fd) / (1 + std::abs(fd)));
    }
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("mu-Futaki invariant") {
  const auto q = PLConvexFunction::affine(dv({1}), -1);
  CHECK(std::abs(mu_futaki(interval(1), dv({0}), q, 0.0)) < 1e-14);

  std::mt19937_64 gen(8);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto P = trial % 2 ? random_lattice_polygon(gen, 3) : interval(1 + trial % 3);
    VectorXd xi(P.dim());
    for (int i = 0; i < P.dim(); ++i) xi[i] = uniform(gen, -2, 2);
    const auto dir = random_pl(gen, P, 1 + trial % 3, 1.5);
    const double lambda = uniform(gen, -10, 5);
    const double h = 1e-5;
    const double fd = -(functional(P, xi, dir, lambda, h) - functional(P, xi, dir, lambda, -h)) / (2 * h);
    const double an = mu_futaki(P, xi, dir, lambda);
    worst = std::max(worst, std::abs(an - fd) / (1 + std::abs(an)));
  }
  CHECK(worst <= 1e-6);

  // Equals minus the directional derivative of the vector entropy on affine directions.
  const auto P = lattice_triangle(2);
  const VectorXd xi = dv({0.4, -0.9}), zeta = dv({1.0, 2.0});
  const double fut = mu_futaki(P, xi, PLConvexFunction::affine(zeta, -7.0), -3.0);
  CHECK(fut == doctest::Approx(-vector_mu_entropy_gradient(P, xi, -3.0).dot(zeta)).epsilon(1e-12));
}

TEST_CASE("Duistermaat-Heckman measure") {
  auto dh = dh_measure(tc_of(interval(1), PLConvexFunction::affine(dv({1}), -1)));
  CHECK(dh.total_mass() == doctest::Approx(1.0));
  CHECK(dh.cdf(0.25) == doctest::Approx(0.25));
  CHECK(dh.point_masses.empty());

  dh = dh_measure(tc_of(interval(1), PLConvexFunction::constant(1, -0.7)));
  REQUIRE(dh.point_masses.size() == 1);
  CHECK(dh.point_masses[0].first == doctest::Approx(0.7));
  CHECK(dh.point_masses[0].second == doctest::Approx(1.0));
  CHECK(dh.densities.empty());

  // Histogram oracle on a 1000 x 1000 grid of cell centres.
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 4; ++trial) {
    const auto P = trial == 0 ? unit_square() : random_lattice_polygon(gen, 3);
    const auto q = trial == 0 ? PLConvexFunction::affine(dv({1, 0}), -1) : random_pl(gen, P, 3, 1.0);
    const auto d = dh_measure(tc_of(P, q));
    CHECK(d.total_mass() == doctest::Approx(to_double(volume(P))).epsilon(1e-12));
    const auto Pd = P.cast<double>();
    VectorXd lo = Pd.vertices()[0], hi = lo;
    for (const auto& v : Pd.vertices()) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    const int N = 1000;
    std::vector<double> values;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const VectorXd x = dv({lo[0] + (hi[0] - lo[0]) * (i + 0.5) / N, lo[1] + (hi[1] - lo[1]) * (j + 0.5) / N});
        if (Pd.contains(x)) values.push_back(-q(x));
      }
    std::sort(values.begin(), values.end());
    const double vol = to_double(volume(P));
    double worst = 0.0;
    for (std::size_t k = 0; k < values.size(); k += 997) {
      const double emp = static_cast<double>(k + 1) / values.size();
      worst = std::max(worst, std::abs(d.cdf(values[k]) / vol - emp));
    }
    CHECK(worst <= 1e-2);
    if (trial == 0) {
      CHECK(d.cdf(0.5) == doctest::Approx(0.5));
      CHECK(worst <= 1e-3);
    }
  }
}

TEST_CASE("squared norm") {
  CHECK(norm_squared(tc_of(interval(1), PLConvexFunction::affine(dv({1}), -1))) == doctest::Approx(1.0 / 12).epsilon(1e-14));
  CHECK(norm_squared(tc_of(unit_square(), PLConvexFunction::constant(2, -3))) == 0.0);
  std::mt19937_64 gen(10);
  for (int trial = 0; trial < 10; ++trial) {
    const auto P = random_lattice_polygon(gen, 3);
    const auto q = random_pl(gen, P, 3, 1.0);
    const double n2 = norm_squared(tc_of(P, q));
    CHECK(n2 > 0);
    CHECK(norm_squared(tc_of(P, q.shifted(-2.5))) == doctest::Approx(n2).epsilon(1e-12));
    // Midpoint-grid oracle for 2 * (int q^2 - (int q)^2 / vol).
    const auto Pd = P.cast<double>();
    VectorXd lo = Pd.vertices()[0], hi = lo;
    for (const auto& v : Pd.vertices()) {
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
    }
    const int N = 1500;
    const double cell = (hi[0] - lo[0]) * (hi[1] - lo[1]) / (double(N) * N);
    double s1 = 0, s2 = 0, s0 = 0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const VectorXd x = dv({lo[0] + (hi[0] - lo[0]) * (i + 0.5) / N, lo[1] + (hi[1] - lo[1]) * (j + 0.5) / N});
        if (!Pd.contains(x)) continue;
        const double v = q(x);
        s0 += cell;
        s1 += cell * v;
        s2 += cell * v * v;
      }
    CHECK(n2 == doctest::Approx(2 * (s2 - s1 * s1 / s0)).epsilon(2e-2));
  }
}

TEST_CASE("Donaldson-type quadratic") {
  CHECK(max_c_na(1.0, 1.0 / 12, 0.0).value == 0.0);
  CHECK(max_c_na(1.0, 1.0 / 12, 0.0).tau == 0.0);
  // Maximum of -(1/(2L)) (4 pi tau M + tau^2 N) is 2 pi^2 M^2 / (L N).
  const auto m = max_c_na(1.0, 1.0 / 12, -1.0);
  CHECK(m.value == doctest::Approx(24 * pi * pi).epsilon(1e-14));
  CHECK(m.tau == doctest::Approx(24 * pi).epsilon(1e-14));
  const auto num = max_c_na_numeric(1.0, 1.0 / 12, -1.0);
  CHECK(rel(num.value, m.value) <= 1e-10);
  CHECK_THROWS_AS(max_c_na(1.0, 0.0, -1.0), Error);

  const auto tc = tc_of(interval(1), PLConvexFunction::affine(dv({1}), -1));
  const double h = 1e-6, M = -0.37;
  const double fd = (c_na(tc, h, M) - c_na(tc, -h, M)) / (2 * h);
  CHECK(fd == doctest::Approx(-2 * pi * M / to_double(self_intersection(tc.polytope()))).epsilon(1e-8));
}
