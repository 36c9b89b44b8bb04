#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mulab/errors.hpp"
#include "mulab/geodesic_ray.hpp"
#include "mulab/na_entropy.hpp"
#include "mulab/quadrature.hpp"
#include "test_support.hpp"

using namespace mulab;
using namespace testing;
using Eigen::VectorXd;
using std::numbers::pi;

namespace {

PLConvexFunction pl1(std::initializer_list<std::pair<double, double>> pieces) {
  std::vector<AffinePiece> p;
  for (auto [s, c] : pieces) p.push_back({dv({s}), c});
  return PLConvexFunction(p);
}

// Composite Gauss-Legendre on [lo, hi] with uniform panels.
template <class F>
double integrate(F&& f, double lo, double hi, int panels) {
  const auto gl = gauss_legendre(16);
  double s = 0;
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p)
    for (int k = 0; k < 16; ++k) s += 0.5 * h * gl.weights[k] * f(lo + p * h + 0.5 * h * (gl.nodes[k] + 1));
  return s;
}

}  // namespace

TEST_CASE("kink form and mollifier") {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = uniform(gen, 0.5, 4);
    const auto P = interval(static_cast<long>(std::ceil(a)));
    const auto q = random_pl(gen, P, 1 + trial % 5, 3.0);
    const auto k = kink_form(q, a);
    for (std::size_t j = 0; j < k.kinks.size(); ++j) {
      CHECK(k.jumps[j] > 0);
      CHECK(k.kinks[j] >= 0);
      CHECK(k.kinks[j] < a);
      if (j) CHECK(k.kinks[j] >= k.kinks[j - 1]);
    }
    const double eps = 1e-2 * a;
    const MollifiedPL m(q, a, eps);
    for (int i = 0; i <= 200; ++i) {
      const double x = a * i / 200.0;
      double v = k.alpha + k.beta * x;
      for (std::size_t j = 0; j < k.kinks.size(); ++j) v += k.jumps[j] * std::max(0.0, x - k.kinks[j]);
      CHECK(v == doctest::Approx(q(dv({x}))).epsilon(1e-12).scale(1.0));
      bool far = true;
      for (double kk : k.kinks) far = far && std::abs(x - kk) >= eps;
      if (far) CHECK(m(x) == doctest::Approx(v).epsilon(1e-12).scale(1.0));
      // Mollified convex function lies above q and within eps * (sum of jumps) of it.
      double total = 0;
      for (double jmp : k.jumps) total += jmp;
      CHECK(m(x) >= v - 1e-12);
      CHECK(m(x) <= v + eps * total + 1e-12);
      CHECK(m.second_derivative(x) >= 0);
      // Derivatives against central differences.
      const double h = 1e-6 * a;
      if (x > h && x < a - h) {
        CHECK(m.derivative(x) == doctest::Approx((m(x + h) - m(x - h)) / (2 * h)).epsilon(1e-6).scale(1.0));
        CHECK(m.second_derivative(x) ==
              doctest::Approx((m.derivative(x + h) - m.derivative(x - h)) / (2 * h)).epsilon(1e-5).scale(1.0));
      }
    }
  }
  // The kernel has unit mass: the second derivative integrates to the jump.
  const auto q = pl1({{-1, 0}, {2, -1.5}});
  const MollifiedPL m(q, 1.0, 0.05);
  CHECK(integrate([&](double x) { return m.second_derivative(x); }, 0.0, 1.0, 400) == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("initial point of the ray against the strong form") {
  std::mt19937_64 gen(22);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = 1 + trial % 3;
    const auto u0 = random_potential(gen, a, 0.2);
    const auto q = random_pl(gen, interval(static_cast<long>(a)), 3, 2.0);
    const ToricRay ray{u0, q, uniform(gen, 0.2, 2), 0.1 * a};
    const double lambda = uniform(gen, -10, 0);
    const RayState st(ray, 0.0);
    const MollifiedPL mq(q, a, 0.1 * a);
    const double tau = ray.tau;
    auto ef = [&](double x) { return std::exp(tau * mq(x)); };
    const double Z = integrate(ef, 0, a, 2000);
    const double N = integrate(
        [&](double x) {
          const double df = tau * mq.derivative(x);
          const double g = 1.0 / u0.second_derivative(x);
          return (scalar_curvature(u0, x) + pi * g * df * df - lambda * (1 + tau * mq(x))) * ef(x);
        },
        0, a, 2000);
    const double strong = -N / Z - lambda * std::log(Z);
    CHECK(ray_w_entropy(st, lambda) == doctest::Approx(strong).epsilon(1e-9));
  }
}

TEST_CASE("trivial rays") {
  const SymplecticPotential1D u0(2.0);
  const ToricRay flat{u0, PLConvexFunction::constant(1, -0.7), 1.5, 0.0};
  for (double t : {0.0, 3.0, 40.0}) {
    CHECK(ray_w_entropy(RayState(flat, t), -2.0) == doctest::Approx(-2 * pi - 2.0 * (1 - std::log(2.0))).epsilon(1e-12));
  }
  std::mt19937_64 gen(23);
  const auto u = random_potential(gen, 2.0, 0.2);
  for (double xi : {-3.0, 1.0}) {
    const ToricRay lin{u, PLConvexFunction::affine(dv({1.0}), -2.0), xi < 0 ? 3.0 : 1.0, 0.0};
    const double slope = xi < 0 ? 3.0 : 1.0;
    const auto tr = w_along_ray(lin, -1.0, {0.0, 5.0, 20.0, 40.0});
    for (double w : tr.w) CHECK(std::abs(w - vector_mu_entropy(interval(2), dv({slope}), -1.0)) <= 1e-10);
  }
  CHECK_THROWS_AS(RayState(flat, -1.0), Error);
  CHECK_THROWS_AS(w_along_ray(flat, 0.0, {1.0, 0.5}), Error);
}

TEST_CASE("conservation, monotonicity and the slope limit") {
  std::mt19937_64 gen(24);
  for (int trial = 0; trial < 4; ++trial) {
    const long a = 1 + trial % 2;
    const auto P = interval(a);
    const auto u0 = random_potential(gen, static_cast<double>(a), 0.2);
    const auto q = random_kinked_pl(gen, static_cast<double>(a), 1 + trial % 3, 2.0);
    const double tau = uniform(gen, 0.5, 2.5);
    const double lambda = -uniform(gen, 0, 10);
    const ToricRay ray{u0, q, tau, 0.0};
    std::vector<double> ts;
    for (int i = 0; i <= 40; ++i) ts.push_back(i);
    const auto tr = w_along_ray(ray, lambda, ts);
    CHECK(tr.max_violation <= 1e-6 * (1 + std::abs(tr.w[0])));
    CHECK(tr.drift_c0 <= 1e-6);
    CHECK(tr.drift_c1 <= 1e-6);
    const double na = mu_lambda_na(ToricTestConfig(P, q), {lambda, tau});
    CHECK(std::abs(tr.w.back() - na) <= 1e-3);
    CHECK(std::abs(tr.w[30] - tr.w[40]) <= 1e-4);
    // Chain: metric entropy at the start dominates the start of the ray, which dominates the limit.
    const double mu0 = mu_entropy_metric(u0, measure_1d(static_cast<double>(a)), lambda);
    CHECK(mu0 >= tr.w[0] - 1e-8);
    CHECK(tr.w[0] >= tr.w.back() - 1e-8);

    // Refinement: smaller eps and doubled nodes.
    const ToricRay fine{u0, q, tau, 0.5e-3 * a};
    const auto tf = w_along_ray(fine, lambda, {0.0, 10.0, 20.0}, 2);
    const auto tc = w_along_ray(ray, lambda, {0.0, 10.0, 20.0}, 1);
    CHECK(tf.drift_c0 <= std::max(tc.drift_c0 / 2, 1e-12));
    CHECK(tf.drift_c1 <= std::max(tc.drift_c1 / 2, 1e-12));
    MESSAGE("drift " << tc.drift_c0 << " " << tc.drift_c1 << " -> " << tf.drift_c0 << " " << tf.drift_c1
                     << "  gap " << tr.w.back() - na);
  }
}
