#include "mulab/geodesic_ray.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mulab/errors.hpp"
#include "mulab/parallel.hpp"

namespace mulab {

using std::numbers::pi;

namespace {

constexpr double kernel_scale = 35.0 / 32.0;

double kernel(double s) {
  if (s <= -1.0 || s >= 1.0) return 0.0;
  const double w = 1.0 - s * s;
  return kernel_scale * w * w * w;
}

// int_{-1}^t kernel
double kernel_cdf(double t) {
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double t2 = t * t;
  return kernel_scale * (t * (1.0 - t2 + 0.6 * t2 * t2 - t2 * t2 * t2 / 7.0) + 16.0 / 35.0);
}

// int_{-1}^t kernel_cdf, so that (x)_+ mollifies to eps ramp(x / eps).
double ramp(double t) {
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return t;
  auto prim = [](double s) {
    const double s2 = s * s;
    return kernel_scale * (s2 * (0.5 - 0.25 * s2 + 0.1 * s2 * s2 - s2 * s2 * s2 / 56.0) + 16.0 * s / 35.0);
  };
  return prim(t) - prim(-1.0);
}

const QuadratureRule& gl20() {
  static const QuadratureRule r = gauss_legendre(20);
  return r;
}

std::vector<double> breakpoints(const RayState& st) {
  const double a = st.a(), eps = st.mollified().eps();
  std::vector<double> b = {0.0, a};
  for (double k : st.mollified().form().kinks) {
    std::vector<double> s;
    for (int j = -8; j <= 8; ++j) s.push_back(j / 8.0);
    // Graded towards the support edges, where t tau q'' overtakes u0''.
    for (int j = 4; j <= 40; ++j) {
      s.push_back(1.0 - std::ldexp(1.0, -j));
      s.push_back(-1.0 + std::ldexp(1.0, -j));
    }
    for (double sj : s) {
      const double x = k + eps * sj;
      if (x > 0 && x < a) b.push_back(x);
    }
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

// Solves u_t'(x) = y for x in [lo, hi].
double invert_gradient(const RayState& st, double y, double lo, double hi) {
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double r = st.u_derivative(x) - y;
    if (r == 0.0) return x;
    if (r > 0) hi = x;
    else lo = x;
    double next = x - r / st.u_second_derivative(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-16 * st.a() || hi - lo <= 1e-16 * st.a()) return next;
    x = next;
  }
  return x;
}

}  // namespace

KinkForm kink_form(const PLConvexFunction& q, double a) {
  if (q.dim() != 1) throw Error(ErrorKind::InvalidInput, "ray needs a PL function of one variable");
  const auto& P = q.pieces();
  auto val = [&](int i, double x) { return P[i].gradient[0] * x + P[i].constant; };
  auto better = [&](int i, int j, double x) {
    const double vi = val(i, x), vj = val(j, x);
    const double tol = 1e-14 * (1.0 + std::abs(vi) + std::abs(vj));
    if (std::abs(vi - vj) <= tol) return P[i].gradient[0] > P[j].gradient[0];
    return vi > vj;
  };
  int cur = 0;
  for (int i = 1; i < static_cast<int>(P.size()); ++i)
    if (better(i, cur, 0.0)) cur = i;
  KinkForm k{P[cur].constant, P[cur].gradient[0], {}, {}};
  double x = 0.0;
  for (;;) {
    int next = -1;
    double at = a;
    for (int j = 0; j < static_cast<int>(P.size()); ++j) {
      const double ds = P[j].gradient[0] - P[cur].gradient[0];
      if (ds <= 0) continue;
      const double xj = std::max(x, (P[cur].constant - P[j].constant) / ds);
      if (xj < at || (xj == at && next >= 0 && P[j].gradient[0] > P[next].gradient[0])) {
        at = xj;
        next = j;
      }
    }
    if (next < 0 || at >= a) break;
    k.kinks.push_back(at);
    k.jumps.push_back(P[next].gradient[0] - P[cur].gradient[0]);
    cur = next;
    x = at;
  }
  return k;
}

MollifiedPL::MollifiedPL(const PLConvexFunction& q, double a, double eps) : form_(kink_form(q, a)), eps_(eps) {
  if (!(eps > 0)) throw Error(ErrorKind::InvalidInput, "smoothing width must be positive");
}

double MollifiedPL::operator()(double x) const {
  double v = form_.alpha + form_.beta * x;
  for (std::size_t j = 0; j < form_.kinks.size(); ++j) v += form_.jumps[j] * eps_ * ramp((x - form_.kinks[j]) / eps_);
  return v;
}

double MollifiedPL::derivative(double x) const {
  double v = form_.beta;
  for (std::size_t j = 0; j < form_.kinks.size(); ++j) v += form_.jumps[j] * kernel_cdf((x - form_.kinks[j]) / eps_);
  return v;
}

double MollifiedPL::second_derivative(double x) const {
  double v = 0.0;
  for (std::size_t j = 0; j < form_.kinks.size(); ++j) v += form_.jumps[j] * kernel((x - form_.kinks[j]) / eps_) / eps_;
  return v;
}

RayState::RayState(const ToricRay& ray, double t)
    : u0_(ray.u0),
      q_(ray.q, ray.u0.a(), ray.smoothing_eps > 0 ? ray.smoothing_eps : 1e-3 * ray.u0.a()),
      tau_(ray.tau),
      t_(t) {
  if (!(t >= 0) || !std::isfinite(t)) throw Error(ErrorKind::InvalidInput, "ray time must be non-negative");
  if (!(ray.tau >= 0) || !std::isfinite(ray.tau)) throw Error(ErrorKind::InvalidInput, "tau must be non-negative");
  for (double j : q_.form().jumps)
    if (!(j >= 0)) throw Error(ErrorKind::ConvexityLoss, "mollified q is not convex");
}

double RayState::g(double x) const {
  const double h = 2.0 * x * (a() - x);
  if (h <= 0) return 0.0;
  return h / (u0_.convexity_factor(x) + h * t_ * d2f(x));
}

RayState ray_state(const ToricRay& ray, double t) { return RayState(ray, t); }

QuadratureRule ray_quadrature(const RayState& st, int resolution) {
  if (resolution < 1) throw Error(ErrorKind::InvalidInput, "resolution must be positive");
  const auto b = breakpoints(st);
  const double max_width = st.a() / (16.0 * resolution);
  const auto& gl = gl20();
  std::vector<double> xs, ws;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    const int pieces = std::max(resolution, static_cast<int>(std::ceil((b[i + 1] - b[i]) / max_width)));
    const double h = (b[i + 1] - b[i]) / pieces;
    for (int p = 0; p < pieces; ++p) {
      const double lo = b[i] + p * h;
      for (Eigen::Index k = 0; k < gl.nodes.size(); ++k) {
        xs.push_back(lo + 0.5 * h * (gl.nodes[k] + 1.0));
        ws.push_back(0.5 * h * gl.weights[k]);
      }
    }
  }
  QuadratureRule r;
  r.nodes = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  r.weights = Eigen::Map<Eigen::VectorXd>(ws.data(), static_cast<Eigen::Index>(ws.size()));
  return r;
}

double ray_w_entropy(const RayState& st, double lambda, int resolution) {
  const auto rule = ray_quadrature(st, resolution);
  const double a = st.a();
  double shift = std::max(st.f(0.0), st.f(a));
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) shift = std::max(shift, st.f(rule.nodes[i]));
  double Z = 0.0, F = 0.0, G = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i], w = rule.weights[i];
    const double fx = st.f(x), e = std::exp(fx - shift);
    Z += w * e;
    F += w * fx * e;
    G += w * st.g(x) * st.d2f(x) * e;
  }
  const double B = std::exp(st.f(0.0) - shift) + std::exp(st.f(a) - shift);
  const double sigma = 1.0 + F / Z - std::log(Z) - shift;
  return -(2.0 * pi * B - pi * G) / Z + lambda * sigma;
}

ConservedIntegrals conserved_integrals(const RayState& st, int resolution) {
  if (resolution < 1) throw Error(ErrorKind::InvalidInput, "resolution must be positive");
  const double a = st.a();
  const double x_lo = 1e-12 * a, x_hi = a - 1e-12 * a;
  std::vector<double> b = {x_lo};
  for (double x : breakpoints(st))
    if (x > x_lo && x < x_hi) b.push_back(x);
  b.push_back(x_hi);
  const double max_width = 0.25 / resolution;
  const auto& gl = gl20();
  ConservedIntegrals c{0.0, 0.0};
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    const double ylo = st.u_derivative(b[i]), yhi = st.u_derivative(b[i + 1]);
    const int pieces = std::max(resolution, static_cast<int>(std::ceil((yhi - ylo) / max_width)));
    const double h = (yhi - ylo) / pieces;
    for (int p = 0; p < pieces; ++p) {
      const double lo = ylo + p * h;
      for (Eigen::Index k = 0; k < gl.nodes.size(); ++k) {
        const double y = lo + 0.5 * h * (gl.nodes[k] + 1.0);
        const double x = invert_gradient(st, y, b[i], b[i + 1]);
        const double fx = st.f(x), w = 0.5 * h * gl.weights[k] * std::exp(fx) / st.u_second_derivative(x);
        c.c0 += w;
        c.c1 += w * fx;
      }
    }
  }
  // Tails beyond the truncation, where f is constant to first order.
  for (double x : {0.0, a}) {
    c.c0 += x_lo * std::exp(st.f(x));
    c.c1 += x_lo * st.f(x) * std::exp(st.f(x));
  }
  return c;
}

RayTrace w_along_ray(const ToricRay& ray, double lambda, const std::vector<double>& t_grid, int resolution) {
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0)) throw Error(ErrorKind::InvalidInput, "ray times must be non-negative");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw Error(ErrorKind::InvalidInput, "t grid must be increasing");
  }
  RayTrace tr;
  const int n = static_cast<int>(t_grid.size());
  tr.t_grid = t_grid;
  tr.w.resize(n);
  tr.c0.resize(n);
  tr.c1.resize(n);
  parallel_for(n, [&](int i) {
    const RayState st(ray, t_grid[i]);
    tr.w[i] = ray_w_entropy(st, lambda, resolution);
    const auto c = conserved_integrals(st, resolution);
    tr.c0[i] = c.c0;
    tr.c1[i] = c.c1;
  });
  tr.non_increasing.assign(n, true);
  for (int i = 0; i + 1 < n; ++i) {
    const double up = tr.w[i + 1] - tr.w[i];
    tr.non_increasing[i + 1] = up <= 0;
    tr.max_violation = std::max(tr.max_violation, up);
  }
  if (n > 0) {
    const double s0 = std::abs(tr.c0[0]), s1 = std::max(std::abs(tr.c1[0]), std::abs(tr.c0[0]));
    for (int i = 0; i < n; ++i) {
      tr.drift_c0 = std::max(tr.drift_c0, std::abs(tr.c0[i] - tr.c0[0]) / s0);
      tr.drift_c1 = std::max(tr.drift_c1, std::abs(tr.c1[i] - tr.c1[0]) / s1);
    }
  }
  return tr;
}

}  // namespace mulab
