#include "grid_quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace mulab::oracle {

namespace {

using Point = Eigen::Vector2d;

struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

struct Halfplane {
  Point a;
  double b;  // a.x <= b
};

std::vector<Point> clip(const std::vector<Point>& poly, const Halfplane& h) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& p = poly[i];
    const Point& r = poly[(i + 1) % poly.size()];
    const double fp = h.a.dot(p) - h.b, fr = h.a.dot(r) - h.b;
    if (fp <= 0) out.push_back(p);
    if ((fp < 0 && fr > 0) || (fp > 0 && fr < 0)) out.push_back(p + (fp / (fp - fr)) * (r - p));
  }
  return out;
}

// Degree-5 seven-point rule on a triangle, in barycentric coordinates.
struct TriangleRule {
  std::array<std::array<double, 3>, 7> bary;
  std::array<double, 7> w;
  TriangleRule() {
    const double s = std::sqrt(15.0);
    const double a1 = (6.0 - s) / 21.0, a2 = (6.0 + s) / 21.0;
    const double w1 = (155.0 - s) / 1200.0, w2 = (155.0 + s) / 1200.0;
    bary[0] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    w[0] = 9.0 / 40.0;
    bary[1] = {a1, a1, 1 - 2 * a1};
    bary[2] = {a1, 1 - 2 * a1, a1};
    bary[3] = {1 - 2 * a1, a1, a1};
    bary[4] = {a2, a2, 1 - 2 * a2};
    bary[5] = {a2, 1 - 2 * a2, a2};
    bary[6] = {1 - 2 * a2, a2, a2};
    for (int i = 1; i < 4; ++i) w[i] = w1;
    for (int i = 4; i < 7; ++i) w[i] = w2;
  }
};

struct Piece {
  Point g;
  double c;
  double operator()(const Point& x) const { return g.dot(x) + c; }
};

std::vector<Piece> pieces_of(const PLConvexFunction& q) {
  std::vector<Piece> out;
  for (const auto& p : q.pieces()) out.push_back({p.gradient.head<2>(), p.constant});
  return out;
}

void integrate_polygon(const std::vector<Point>& poly, const Piece& p, double tau, const TriangleRule& rule, Kahan& i0,
                       Kahan& i1) {
  for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
    const Point &A = poly[0], &B = poly[k], &C = poly[k + 1];
    const double area = 0.5 * std::abs((B - A)[0] * (C - A)[1] - (B - A)[1] * (C - A)[0]);
    if (area == 0.0) continue;
    double s0 = 0.0, s1 = 0.0;
    for (int r = 0; r < 7; ++r) {
      const Point x = rule.bary[r][0] * A + rule.bary[r][1] * B + rule.bary[r][2] * C;
      const double t = tau * p(x);
      const double e = std::exp(t);
      s0 += rule.w[r] * e;
      s1 += rule.w[r] * t * e;
    }
    i0.add(area * s0);
    i1.add(area * s1);
  }
}

GridBundle grid_2d(const LatticePolytope& P, const PLConvexFunction& q, double tau, std::int64_t N, std::int64_t M) {
  const auto pieces = pieces_of(q);
  const int k = static_cast<int>(pieces.size());
  std::vector<Halfplane> facets;
  for (const auto& f : P.facets()) facets.push_back({vec_cast<double>(f.normal).head<2>(), to_double(f.offset)});
  Point lo = vec_cast<double>(P.vertices()[0]).head<2>(), hi = lo;
  for (const auto& v : P.vertices()) {
    lo = lo.cwiseMin(vec_cast<double>(v).head<2>());
    hi = hi.cwiseMax(vec_cast<double>(v).head<2>());
  }
  const double hx = (hi[0] - lo[0]) / static_cast<double>(N);
  const double hy = (hi[1] - lo[1]) / static_cast<double>(N);
  const double g = 0.5 / std::sqrt(3.0);
  const TriangleRule rule;
  Kahan I0, I1;
  std::vector<double> corner_vals(4 * k);
  for (std::int64_t i = 0; i < N; ++i) {
    Kahan r0, r1;
    const double x0 = lo[0] + hx * static_cast<double>(i), x1 = x0 + hx;
    for (std::int64_t j = 0; j < N; ++j) {
      const double y0 = lo[1] + hy * static_cast<double>(j), y1 = y0 + hy;
      const std::array<Point, 4> corners = {Point(x0, y0), Point(x1, y0), Point(x1, y1), Point(x0, y1)};
      bool inside = true;
      for (const auto& f : facets) {
        for (const auto& c : corners)
          if (f.a.dot(c) > f.b) inside = false;
        if (!inside) break;
      }
      int active = -1;
      if (inside) {
        const Point mid(0.5 * (x0 + x1), 0.5 * (y0 + y1));
        active = 0;
        for (int p = 1; p < k; ++p)
          if (pieces[p](mid) > pieces[active](mid)) active = p;
        for (int p = 0; p < k && active >= 0; ++p) {
          if (p == active) continue;
          for (const auto& c : corners)
            if (pieces[p](c) > pieces[active](c)) active = -1;
        }
      }
      if (active >= 0) {
        const Piece& pc = pieces[active];
        const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
        double s0 = 0.0, s1 = 0.0;
        for (int a = -1; a <= 1; a += 2) {
          for (int b = -1; b <= 1; b += 2) {
            const double t = tau * pc(Point(cx + a * g * hx, cy + b * g * hy));
            const double e = std::exp(t);
            s0 += e;
            s1 += t * e;
          }
        }
        r0.add(0.25 * hx * hy * s0);
        r1.add(0.25 * hx * hy * s1);
        continue;
      }
      std::vector<Point> cell(corners.begin(), corners.end());
      for (const auto& f : facets) {
        cell = clip(cell, f);
        if (cell.size() < 3) break;
      }
      if (cell.size() < 3) continue;
      for (int p = 0; p < k; ++p) {
        std::vector<Point> part = cell;
        for (int o = 0; o < k && part.size() >= 3; ++o) {
          if (o == p) continue;
          part = clip(part, {pieces[o].g - pieces[p].g, pieces[p].c - pieces[o].c});
        }
        if (part.size() >= 3) integrate_polygon(part, pieces[p], tau, rule, r0, r1);
      }
    }
    I0.add(r0.sum);
    I1.add(r1.sum);
  }

  // Boundary: 3-point Gauss panels, split where the active piece changes.
  const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  Kahan B0;
  for (const auto& s : boundary_simplices(P)) {
    const Point a = vec_cast<double>(s.vertices[0]).head<2>();
    const Point b = vec_cast<double>(s.vertices[1]).head<2>();
    const double L = to_double(s.measure);
    std::vector<double> cuts = {0.0, 1.0};
    for (int p = 0; p < k; ++p) {
      for (int o = p + 1; o < k; ++o) {
        const double fa = pieces[p](a) - pieces[o](a), fb = pieces[p](b) - pieces[o](b);
        if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) cuts.push_back(fa / (fa - fb));
      }
    }
    std::sort(cuts.begin(), cuts.end());
    Kahan e;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double s0 = cuts[c], s1 = cuts[c + 1];
      if (s1 <= s0) continue;
      const auto m = std::max<std::int64_t>(1, std::llround(static_cast<double>(M) * (s1 - s0)));
      const double h = (s1 - s0) / static_cast<double>(m);
      const Point mid = a + (0.5 * (s0 + s1)) * (b - a);
      int active = 0;
      for (int p = 1; p < k; ++p)
        if (pieces[p](mid) > pieces[active](mid)) active = p;
      for (std::int64_t t = 0; t < m; ++t) {
        const double sc = s0 + h * (static_cast<double>(t) + 0.5);
        double acc = 0.0;
        for (int r = 0; r < 3; ++r) acc += gw[r] * std::exp(tau * pieces[active](a + (sc + 0.5 * h * gx[r]) * (b - a)));
        e.add(0.5 * h * acc);
      }
    }
    B0.add(L * e.sum);
  }
  return {I0.sum, I1.sum, B0.sum};
}

GridBundle grid_1d(const LatticePolytope& P, const PLConvexFunction& q, double tau, std::int64_t N) {
  const double lo = to_double(P.vertices()[0][0]), hi = to_double(P.vertices()[1][0]);
  const auto& pc = q.pieces();
  std::vector<double> cuts = {lo, hi};
  for (std::size_t p = 0; p < pc.size(); ++p) {
    for (std::size_t o = p + 1; o < pc.size(); ++o) {
      const double dg = pc[p].gradient[0] - pc[o].gradient[0];
      if (dg == 0.0) continue;
      const double t = (pc[o].constant - pc[p].constant) / dg;
      if (t > lo && t < hi) cuts.push_back(t);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  const double g = 0.5 / std::sqrt(3.0);
  Kahan I0, I1;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double a = cuts[c], b = cuts[c + 1];
    if (b <= a) continue;
    const auto m = std::max<std::int64_t>(1, std::llround(static_cast<double>(N) * (b - a) / (hi - lo)));
    const double h = (b - a) / static_cast<double>(m);
    Eigen::VectorXd mid(1);
    mid[0] = 0.5 * (a + b);
    const auto& p = pc[q.active_piece(mid)];
    const double g0 = p.gradient[0], c0 = p.constant;
    Kahan s0, s1;
    for (std::int64_t t = 0; t < m; ++t) {
      const double x = a + h * (static_cast<double>(t) + 0.5);
      double acc0 = 0.0, acc1 = 0.0;
      for (int r = -1; r <= 1; r += 2) {
        const double v = tau * (g0 * (x + r * g * h) + c0);
        const double e = std::exp(v);
        acc0 += e;
        acc1 += v * e;
      }
      s0.add(0.5 * h * acc0);
      s1.add(0.5 * h * acc1);
    }
    I0.add(s0.sum);
    I1.add(s1.sum);
  }
  Eigen::VectorXd x(1);
  x[0] = lo;
  double B0 = std::exp(tau * q(x));
  x[0] = hi;
  B0 += std::exp(tau * q(x));
  return {I0.sum, I1.sum, B0};
}

}  // namespace

GridBundle grid_bundle(const LatticePolytope& P, const PLConvexFunction& q, double tau, std::int64_t cells,
                       std::int64_t boundary_segments) {
  if (P.dim() == 1) return grid_1d(P, q, tau, cells);
  if (P.dim() == 2) return grid_2d(P, q, tau, cells, boundary_segments);
  throw Error(ErrorKind::InvalidInput, "grid oracle supports dimensions 1 and 2");
}

}  // namespace mulab::oracle
