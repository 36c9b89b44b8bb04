#include "mulab/exp_integrals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mulab/divided_difference.hpp"

namespace mulab {

PLConvexFunction::PLConvexFunction(std::vector<AffinePiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw Error(ErrorKind::InvalidInput, "PL function needs at least one piece");
  const auto n = pieces_.front().gradient.size();
  for (const auto& p : pieces_) {
    if (p.gradient.size() != n) throw Error(ErrorKind::InvalidInput, "pieces have inconsistent dimensions");
    if (!p.gradient.allFinite() || !std::isfinite(p.constant))
      throw Error(ErrorKind::NonFiniteInput, "non-finite piece coefficient");
  }
}

PLConvexFunction PLConvexFunction::constant(int dim, double c) {
  return PLConvexFunction({AffinePiece{Eigen::VectorXd::Zero(dim), c}});
}

PLConvexFunction PLConvexFunction::affine(const Eigen::VectorXd& gradient, double c) {
  return PLConvexFunction({AffinePiece{gradient, c}});
}

double PLConvexFunction::operator()(const Eigen::VectorXd& mu) const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& p : pieces_) m = std::max(m, p(mu));
  return m;
}

int PLConvexFunction::active_piece(const Eigen::VectorXd& mu) const {
  int best = 0;
  double m = pieces_[0](mu);
  for (int i = 1; i < static_cast<int>(pieces_.size()); ++i) {
    const double v = pieces_[i](mu);
    if (v > m) {
      m = v;
      best = i;
    }
  }
  return best;
}

PLConvexFunction PLConvexFunction::scaled(double d) const {
  auto out = pieces_;
  for (auto& p : out) {
    p.gradient *= d;
    p.constant *= d;
  }
  return PLConvexFunction(std::move(out));
}

PLConvexFunction PLConvexFunction::shifted(double c) const {
  auto out = pieces_;
  for (auto& p : out) p.constant += c;
  return PLConvexFunction(std::move(out));
}

double PLConvexFunction::max_on(const LatticePolytope& P) const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& v : P.vertices()) m = std::max(m, (*this)(vec_cast<double>(v)));
  return m;
}

PLConvexFunction PLConvexFunction::normalized_on(const LatticePolytope& P) const { return shifted(-max_on(P)); }

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

bool same_piece(const AffinePiece& a, const AffinePiece& b) {
  const double s = 1.0 + std::max(a.gradient.lpNorm<Eigen::Infinity>(), std::abs(a.constant));
  return (a.gradient - b.gradient).lpNorm<Eigen::Infinity>() <= 1e-14 * s && std::abs(a.constant - b.constant) <= 1e-14 * s;
}

// Keeps the part of a convex polygon where <a, x> <= b.
std::vector<VectorXd> clip(const std::vector<VectorXd>& poly, const VectorXd& a, double b) {
  std::vector<VectorXd> out;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const VectorXd& p = poly[i];
    const VectorXd& q = poly[(i + 1) % m];
    const double fp = a.dot(p) - b;
    const double fq = a.dot(q) - b;
    if (fp <= 0) out.push_back(p);
    if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) {
      const double s = fp / (fp - fq);
      out.push_back(p + s * (q - p));
    }
  }
  return out;
}

double polygon_area(const std::vector<VectorXd>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    a += p[0] * q[1] - p[1] * q[0];
  }
  return 0.5 * a;
}

// Parameters in (0,1) where two pieces cross along p + s (q - p), plus the endpoints.
std::vector<double> breakpoints(const PLConvexFunction& f, const VectorXd& p, const VectorXd& q) {
  std::vector<double> s = {0.0, 1.0};
  const auto& pc = f.pieces();
  for (std::size_t i = 0; i < pc.size(); ++i) {
    for (std::size_t j = i + 1; j < pc.size(); ++j) {
      const double a = pc[i](p) - pc[j](p);
      const double b = (pc[i](q) - pc[j](q)) - a;
      if (b == 0.0) continue;
      const double t = -a / b;
      if (t > 0.0 && t < 1.0) s.push_back(t);
    }
  }
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

Subdivision subdivide(const LatticePolytope& P, const PLConvexFunction& q) {
  if (q.dim() != P.dim()) throw Error(ErrorKind::InvalidInput, "PL function and polytope dimensions differ");
  Subdivision sub;
  sub.dim = P.dim();
  const auto& pieces = q.pieces();
  const int k = static_cast<int>(pieces.size());
  const double scale = std::abs(to_double(P.volume()));

  if (P.dim() == 1) {
    const double lo = to_double(P.vertices()[0][0]);
    const double hi = to_double(P.vertices()[1][0]);
    for (int i = 0; i < k; ++i) {
      double a = lo, b = hi;
      bool empty = false;
      for (int j = 0; j < k && !empty; ++j) {
        if (j == i) continue;
        if (same_piece(pieces[i], pieces[j])) {
          if (j < i) empty = true;
          continue;
        }
        // (g_j - g_i) t <= c_i - c_j
        const double g = pieces[j].gradient[0] - pieces[i].gradient[0];
        const double c = pieces[i].constant - pieces[j].constant;
        if (g > 0) b = std::min(b, c / g);
        else if (g < 0) a = std::max(a, c / g);
        else if (c < 0) empty = true;
      }
      if (empty || b - a <= 1e-14 * scale) continue;
      VectorXd va(1), vb(1);
      va[0] = a;
      vb[0] = b;
      auto region = Polytope<double>::from_vertices({va, vb});
      sub.cells.push_back({i, region, triangulate(region)});
    }
    for (const auto& s : boundary_simplices(P)) {
      Simplex<double> d{{vec_cast<double>(s.vertices[0])}, to_double(s.measure)};
      sub.boundary.push_back({q.active_piece(d.vertices[0]), d});
    }
    return sub;
  }

  std::vector<VectorXd> base;
  for (const auto& v : P.vertices()) base.push_back(vec_cast<double>(v));
  for (int i = 0; i < k; ++i) {
    std::vector<VectorXd> poly = base;
    bool empty = false;
    for (int j = 0; j < k && !empty && !poly.empty(); ++j) {
      if (j == i) continue;
      if (same_piece(pieces[i], pieces[j])) {
        if (j < i) empty = true;
        continue;
      }
      poly = clip(poly, pieces[j].gradient - pieces[i].gradient, pieces[i].constant - pieces[j].constant);
    }
    if (empty || poly.size() < 3 || std::abs(polygon_area(poly)) <= 1e-14 * scale) continue;
    auto region = Polytope<double>::from_vertices(poly);
    sub.cells.push_back({i, region, triangulate(region)});
  }
  for (const auto& s : boundary_simplices(P)) {
    const VectorXd p = vec_cast<double>(s.vertices[0]);
    const VectorXd r = vec_cast<double>(s.vertices[1]);
    const double L = to_double(s.measure);
    const auto bp = breakpoints(q, p, r);
    for (std::size_t m = 0; m + 1 < bp.size(); ++m) {
      const double s0 = bp[m], s1 = bp[m + 1];
      if (s1 - s0 <= 1e-15) continue;
      const VectorXd a = p + s0 * (r - p);
      const VectorXd b = p + s1 * (r - p);
      const int piece = q.active_piece(p + 0.5 * (s0 + s1) * (r - p));
      sub.boundary.push_back({piece, Simplex<double>{{a, b}, L * (s1 - s0)}});
    }
  }
  return sub;
}

SimplexMoments simplex_moments(const Simplex<double>& S, const Eigen::VectorXd& values, int order, double shift) {
  const int d = S.dim();
  if (values.size() != d + 1) throw Error(ErrorKind::InvalidInput, "one exponent value per vertex required");
  if (!values.allFinite()) throw Error(ErrorKind::NonFiniteInput, "non-finite exponent value");
  std::vector<double> x(d + 1);
  for (int i = 0; i <= d; ++i) x[i] = values[i] - shift;
  const double factor = S.measure * factorial(d);
  SimplexMoments m;
  m.m0 = factor * divided_difference_exp(x);
  if (order >= 1) {
    m.m1.resize(d + 1);
    for (int i = 0; i <= d; ++i) {
      auto y = x;
      y.push_back(x[i]);
      m.m1[i] = factor * divided_difference_exp(std::move(y));
    }
  }
  if (order >= 2) {
    m.m2.resize(d + 1, d + 1);
    for (int i = 0; i <= d; ++i) {
      for (int j = i; j <= d; ++j) {
        auto y = x;
        y.push_back(x[i]);
        y.push_back(x[j]);
        m.m2(i, j) = m.m2(j, i) = factor * (i == j ? 2.0 : 1.0) * divided_difference_exp(std::move(y));
      }
    }
  }
  return m;
}

double exp_integral_simplex(const Simplex<double>& S, const Eigen::VectorXd& values) {
  return simplex_moments(S, values, 0).m0;
}

namespace {

MatrixXd vertex_matrix(const Simplex<double>& S) {
  MatrixXd V(S.vertices.front().size(), S.vertices.size());
  for (std::size_t i = 0; i < S.vertices.size(); ++i) V.col(i) = S.vertices[i];
  return V;
}

VectorXd piece_values(const AffinePiece& p, const Simplex<double>& S, double tau) {
  VectorXd v(S.vertices.size());
  for (std::size_t i = 0; i < S.vertices.size(); ++i) v[i] = tau * p(S.vertices[i]);
  return v;
}

}  // namespace

IntegralBundle bundle(const Subdivision& sub, const PLConvexFunction& q, double tau) {
  if (!std::isfinite(tau) || tau < 0) throw Error(ErrorKind::InvalidInput, "tau must be finite and nonnegative");
  IntegralBundle b;
  b.moment = VectorXd::Zero(sub.dim);
  for (const auto& cell : sub.cells) {
    const auto& piece = q.pieces()[cell.piece];
    for (const auto& S : cell.simplices) {
      const VectorXd vals = piece_values(piece, S, tau);
      const auto m = simplex_moments(S, vals, 1);
      b.I0 += m.m0;
      b.I1 += vals.dot(m.m1);
      b.moment += vertex_matrix(S) * m.m1;
    }
  }
  for (const auto& bp : sub.boundary) {
    const VectorXd vals = piece_values(q.pieces()[bp.piece], bp.simplex, tau);
    b.B0 += simplex_moments(bp.simplex, vals, 0).m0;
  }
  return b;
}

IntegralBundle bundle(const LatticePolytope& P, const PLConvexFunction& q, double tau) {
  return bundle(subdivide(P, q), q, tau);
}

WeightedMoments weighted_moments(const Subdivision& sub, const PLConvexFunction& q, const Eigen::VectorXd& xi) {
  if (xi.size() != sub.dim) throw Error(ErrorKind::InvalidInput, "xi has the wrong dimension");
  if (!xi.allFinite()) throw Error(ErrorKind::NonFiniteInput, "non-finite xi");
  WeightedMoments w;
  const int n = sub.dim;
  w.shift = -std::numeric_limits<double>::infinity();
  for (const auto& cell : sub.cells)
    for (const auto& v : cell.region.vertices()) w.shift = std::max(w.shift, xi.dot(v));
  w.J1 = VectorXd::Zero(n);
  w.J2 = MatrixXd::Zero(n, n);
  w.K1 = VectorXd::Zero(n);
  w.qJ1 = VectorXd::Zero(n);
  auto values = [&](const Simplex<double>& S) {
    VectorXd v(S.vertices.size());
    for (std::size_t i = 0; i < S.vertices.size(); ++i) v[i] = xi.dot(S.vertices[i]);
    return v;
  };
  for (const auto& cell : sub.cells) {
    const auto& piece = q.pieces()[cell.piece];
    for (const auto& S : cell.simplices) {
      const auto m = simplex_moments(S, values(S), 2, w.shift);
      const MatrixXd V = vertex_matrix(S);
      const VectorXd m1 = V * m.m1;
      const MatrixXd m2 = V * m.m2 * V.transpose();
      w.J0 += m.m0;
      w.J1 += m1;
      w.J2 += m2;
      w.qJ0 += piece.gradient.dot(m1) + piece.constant * m.m0;
      w.qJ1 += m2 * piece.gradient + piece.constant * m1;
    }
  }
  for (const auto& bp : sub.boundary) {
    const auto& piece = q.pieces()[bp.piece];
    const auto m = simplex_moments(bp.simplex, values(bp.simplex), 1, w.shift);
    const VectorXd m1 = vertex_matrix(bp.simplex) * m.m1;
    w.K0 += m.m0;
    w.K1 += m1;
    w.qK0 += piece.gradient.dot(m1) + piece.constant * m.m0;
  }
  return w;
}

WeightedMoments weighted_moments(const LatticePolytope& P, const Eigen::VectorXd& xi) {
  const auto zero = PLConvexFunction::constant(P.dim(), 0.0);
  return weighted_moments(subdivide(P, zero), zero, xi);
}

namespace {

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : gen_(seed) {}
  double operator()() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

struct Welford {
  std::int64_t n = 0;
  double mean = 0.0, m2 = 0.0;
  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

}  // namespace

BundleEstimate mc_oracle(const LatticePolytope& P, const PLConvexFunction& q, double tau, std::int64_t samples,
                         std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorKind::InvalidInput, "samples must be positive");
  const int n = P.dim();
  const auto Pd = P.cast<double>();
  VectorXd lo = Pd.vertices()[0], hi = Pd.vertices()[0];
  for (const auto& v : Pd.vertices()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const double box = (hi - lo).prod();
  Uniform u(seed);
  Welford f0, f1;
  std::vector<Welford> fm(n);
  VectorXd x(n);
  for (std::int64_t s = 0; s < samples; ++s) {
    for (int i = 0; i < n; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * u();
    double e = 0.0, e1 = 0.0;
    if (Pd.contains(x)) {
      const double t = tau * q(x);
      e = std::exp(t);
      e1 = t * e;
    }
    f0.add(e);
    f1.add(e1);
    for (int i = 0; i < n; ++i) fm[i].add(x[i] * e);
  }
  BundleEstimate est;
  est.value.I0 = box * f0.mean;
  est.value.I1 = box * f1.mean;
  est.value.moment = VectorXd(n);
  for (int i = 0; i < n; ++i) est.value.moment[i] = box * fm[i].mean;
  est.se_I0 = box * std::sqrt(f0.variance() / static_cast<double>(samples));
  est.se_I1 = box * std::sqrt(f1.variance() / static_cast<double>(samples));

  const auto bd = boundary_simplices(P);
  if (n == 1) {
    for (const auto& s : bd) est.value.B0 += to_double(s.measure) * std::exp(tau * q(vec_cast<double>(s.vertices[0])));
    return est;
  }
  double total = 0.0;
  for (const auto& s : bd) total += to_double(s.measure);
  double var = 0.0;
  for (const auto& s : bd) {
    const double L = to_double(s.measure);
    const VectorXd a = vec_cast<double>(s.vertices[0]);
    const VectorXd b = vec_cast<double>(s.vertices[1]);
    const auto m = std::max<std::int64_t>(2, std::llround(static_cast<double>(samples) * L / total));
    Welford w;
    for (std::int64_t k = 0; k < m; ++k) w.add(std::exp(tau * q(VectorXd(a + u() * (b - a)))));
    est.value.B0 += L * w.mean;
    var += L * L * w.variance() / static_cast<double>(m);
  }
  est.se_B0 = std::sqrt(var);
  return est;
}

}  // namespace mulab
