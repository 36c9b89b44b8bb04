#include "mulab/polytope.hpp"

#include <algorithm>
#include <cmath>

namespace mulab {

namespace {

template <class S>
S abs_of(const S& x) {
  return x < 0 ? S(-x) : x;
}

template <class S>
bool is_zero(const S& x, const S& scale) {
  if constexpr (std::is_same_v<S, double>) {
    return std::abs(x) <= 1e-12 * std::max(1.0, std::abs(scale));
  } else {
    (void)scale;
    return x == 0;
  }
}

template <class S>
bool leq(const S& x, const S& y) {
  if constexpr (std::is_same_v<S, double>) {
    return x <= y + 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
  } else {
    return x <= y;
  }
}

template <class S>
bool same_point(const Vec<S>& p, const Vec<S>& q) {
  if constexpr (std::is_same_v<S, double>) {
    const double s = std::max({1.0, p.template lpNorm<Eigen::Infinity>(), q.template lpNorm<Eigen::Infinity>()});
    return (p - q).template lpNorm<Eigen::Infinity>() <= 1e-11 * s;
  } else {
    return p == q;
  }
}

template <class S>
S cross2(const Vec<S>& a, const Vec<S>& b) {
  return S(a[0] * b[1] - a[1] * b[0]);
}

template <class S>
S cross2(const Vec<S>& o, const Vec<S>& a, const Vec<S>& b) {
  return S((a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]));
}

template <class S>
S cross_scale(const Vec<S>& o, const Vec<S>& a, const Vec<S>& b) {
  if constexpr (std::is_same_v<S, double>) {
    return (a - o).norm() * (b - o).norm();
  } else {
    return S(1);
  }
}

// 0 for the upper half-plane (including the positive x-axis), 1 otherwise.
template <class S>
int half(const Vec<S>& d) {
  return (d[1] > 0 || (d[1] == 0 && d[0] > 0)) ? 0 : 1;
}

template <class S>
void dedup(std::vector<Vec<S>>& pts) {
  std::vector<Vec<S>> out;
  for (auto& p : pts) {
    if (std::none_of(out.begin(), out.end(), [&](const Vec<S>& q) { return same_point(p, q); })) out.push_back(p);
  }
  pts = std::move(out);
}

// Lexicographic order.
template <class S>
bool lex_less(const Vec<S>& a, const Vec<S>& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return false;
}

// Andrew's monotone chain; drops collinear points; returns counter-clockwise order.
template <class S>
std::vector<Vec<S>> convex_hull_2d(std::vector<Vec<S>> pts) {
  std::sort(pts.begin(), pts.end(), lex_less<S>);
  dedup(pts);
  if (pts.size() < 3) return pts;
  std::vector<Vec<S>> hull(2 * pts.size());
  std::size_t k = 0;
  auto turn_left = [](const Vec<S>& o, const Vec<S>& a, const Vec<S>& b) {
    const S c = cross2(o, a, b);
    return c > 0 && !is_zero(c, cross_scale(o, a, b));
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && !turn_left(hull[k - 2], hull[k - 1], pts[i])) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && !turn_left(hull[k - 2], hull[k - 1], pts[i - 1])) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  return hull;
}

// Bounded iff the normals positively span: every counter-clockwise gap between distinct
// consecutive directions is below pi.
template <class S>
bool normals_positively_span(const std::vector<Vec<S>>& normals, int dim) {
  if (dim == 1) {
    bool pos = false, neg = false;
    for (const auto& v : normals) {
      if (v[0] > 0) pos = true;
      if (v[0] < 0) neg = true;
    }
    return pos && neg;
  }
  const Vec<S> origin = Vec<S>::Zero(2);
  auto parallel = [&](const Vec<S>& a, const Vec<S>& b) { return is_zero(cross2(a, b), cross_scale(origin, a, b)); };
  std::vector<Vec<S>> dirs;
  for (const auto& v : normals) {
    if (v[0] == 0 && v[1] == 0) continue;
    const bool seen = std::any_of(dirs.begin(), dirs.end(),
                                  [&](const Vec<S>& d) { return parallel(d, v) && S(d.dot(v)) > 0; });
    if (!seen) dirs.push_back(v);
  }
  if (dirs.size() < 3) return false;
  std::sort(dirs.begin(), dirs.end(), [](const Vec<S>& a, const Vec<S>& b) {
    const int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    return cross2(a, b) > 0;
  });
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const auto& a = dirs[i];
    const auto& b = dirs[(i + 1) % dirs.size()];
    if (parallel(a, b) || cross2(a, b) < 0) return false;
  }
  return true;
}

template <class S>
std::vector<Vec<S>> enumerate_vertices(const std::vector<Vec<S>>& normals, const std::vector<S>& offsets, int dim) {
  const std::size_t m = normals.size();
  std::vector<Vec<S>> found;
  auto feasible = [&](const Vec<S>& x) {
    for (std::size_t k = 0; k < m; ++k)
      if (!leq(S(normals[k].dot(x)), offsets[k])) return false;
    return true;
  };
  if (dim == 1) {
    for (std::size_t i = 0; i < m; ++i) {
      if (normals[i][0] == 0) continue;
      Vec<S> x(1);
      x[0] = S(offsets[i] / normals[i][0]);
      if (feasible(x)) found.push_back(x);
    }
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const S det = cross2(normals[i], normals[j]);
        if (is_zero(det, cross_scale(Vec<S>(Vec<S>::Zero(2)), normals[i], normals[j]))) continue;
        Vec<S> x(2);
        x[0] = S((offsets[i] * normals[j][1] - offsets[j] * normals[i][1]) / det);
        x[1] = S((normals[i][0] * offsets[j] - normals[j][0] * offsets[i]) / det);
        if (feasible(x)) found.push_back(x);
      }
    }
  }
  dedup(found);
  return found;
}

}  // namespace

template <class Scalar>
Polytope<Scalar> Polytope<Scalar>::from_ordered_vertices(std::vector<Point> v, int dim) {
  Polytope P;
  P.dim_ = dim;
  P.vertices_ = std::move(v);
  const auto& V = P.vertices_;
  if (dim == 1) {
    Facet<Scalar> lo, hi;
    lo.normal = Point::Constant(1, Scalar(-1));
    lo.offset = Scalar(-V[0][0]);
    lo.vertices = {V[0]};
    hi.normal = Point::Constant(1, Scalar(1));
    hi.offset = V[1][0];
    hi.vertices = {V[1]};
    P.facets_ = {lo, hi};
    P.volume_ = Scalar(V[1][0] - V[0][0]);
    return P;
  }
  const std::size_t m = V.size();
  Scalar twice_area(0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& p = V[i];
    const auto& q = V[(i + 1) % m];
    twice_area += cross2(p, q);
    Facet<Scalar> f;
    Point n(2);
    n[0] = Scalar(q[1] - p[1]);
    n[1] = Scalar(p[0] - q[0]);
    if constexpr (std::is_same_v<Scalar, double>) {
      n /= n.norm();
    } else {
      n = primitive_integer_vector(n);
    }
    f.normal = n;
    f.offset = Scalar(n.dot(p));
    f.vertices = {p, q};
    P.facets_.push_back(std::move(f));
  }
  P.volume_ = Scalar(twice_area / 2);
  return P;
}

template <class Scalar>
Polytope<Scalar> Polytope<Scalar>::from_halfspaces(const std::vector<Point>& normals, const std::vector<Scalar>& offsets) {
  if (normals.empty() || normals.size() != offsets.size())
    throw Error(ErrorKind::InvalidInput, "normals and offsets must be nonempty and of equal length");
  const int dim = static_cast<int>(normals.front().size());
  if (dim < 1 || dim > 2) throw Error(ErrorKind::InvalidInput, "only dimensions 1 and 2 are supported");
  for (const auto& n : normals)
    if (n.size() != dim) throw Error(ErrorKind::InvalidInput, "inconsistent normal dimensions");
  if (!normals_positively_span(normals, dim)) throw Error(ErrorKind::UnboundedRegion, "halfspace intersection is unbounded");
  auto verts = enumerate_vertices(normals, offsets, dim);
  if (dim == 1) {
    if (verts.size() < 2) throw Error(ErrorKind::EmptyRegion, "interval is empty or a point");
    std::sort(verts.begin(), verts.end(), lex_less<Scalar>);
    return from_ordered_vertices({verts.front(), verts.back()}, 1);
  }
  auto hull = convex_hull_2d(verts);
  if (hull.size() < 3) throw Error(ErrorKind::EmptyRegion, "polygon is empty or not full-dimensional");
  return from_ordered_vertices(std::move(hull), 2);
}

template <class Scalar>
Polytope<Scalar> Polytope<Scalar>::from_vertices(const std::vector<Point>& points) {
  if (points.empty()) throw Error(ErrorKind::EmptyRegion, "no points");
  const int dim = static_cast<int>(points.front().size());
  if (dim < 1 || dim > 2) throw Error(ErrorKind::InvalidInput, "only dimensions 1 and 2 are supported");
  for (const auto& p : points)
    if (p.size() != dim) throw Error(ErrorKind::InvalidInput, "inconsistent point dimensions");
  if (dim == 1) {
    auto lo = *std::min_element(points.begin(), points.end(), lex_less<Scalar>);
    auto hi = *std::max_element(points.begin(), points.end(), lex_less<Scalar>);
    if (same_point(lo, hi)) throw Error(ErrorKind::EmptyRegion, "interval is a point");
    return from_ordered_vertices({lo, hi}, 1);
  }
  auto hull = convex_hull_2d(points);
  if (hull.size() < 3) throw Error(ErrorKind::EmptyRegion, "points are not affinely spanning");
  return from_ordered_vertices(std::move(hull), 2);
}

template <class Scalar>
bool Polytope<Scalar>::contains(const Point& p) const {
  for (const auto& f : facets_)
    if (!leq(Scalar(f.normal.dot(p)), f.offset)) return false;
  return true;
}

template <class Scalar>
typename Polytope<Scalar>::Point Polytope<Scalar>::centroid_of_vertices() const {
  Point c = Point::Zero(dim_);
  for (const auto& v : vertices_) c += v;
  return Point(c / Scalar(static_cast<int>(vertices_.size())));
}

template <class Scalar>
Scalar simplex_volume(const std::vector<Vec<Scalar>>& v) {
  const int d = static_cast<int>(v.size()) - 1;
  if (d == 0) return Scalar(1);
  if (d == 1) return (v[1] - v[0]).norm();
  if (d == 2 && v[0].size() == 2) return Scalar(abs_of(cross2(v[0], v[1], v[2])) / 2);
  throw Error(ErrorKind::InvalidInput, "simplex dimension not supported");
}

template <>
Rational simplex_volume<Rational>(const std::vector<QVec>& v) {
  const int d = static_cast<int>(v.size()) - 1;
  if (d == 0) return Rational(1);
  if (d == 1 && v[0].size() == 1) return abs_of(Rational(v[1][0] - v[0][0]));
  if (d == 2 && v[0].size() == 2) return Rational(abs_of(cross2(v[0], v[1], v[2])) / 2);
  throw Error(ErrorKind::InvalidInput, "exact Euclidean volume unavailable for this simplex");
}

template <class Scalar>
std::vector<Simplex<Scalar>> triangulate(const Polytope<Scalar>& P) {
  std::vector<Simplex<Scalar>> out;
  const auto& V = P.vertices();
  if (P.dim() == 1) {
    out.push_back({{V[0], V[1]}, P.volume()});
    return out;
  }
  for (std::size_t i = 1; i + 1 < V.size(); ++i) {
    Simplex<Scalar> s{{V[0], V[i], V[i + 1]}, Scalar(0)};
    s.measure = simplex_volume(s.vertices);
    out.push_back(std::move(s));
  }
  return out;
}

QVec primitive_integer_vector(const QVec& v) {
  using boost::multiprecision::mpz_int;
  mpz_int l = 1;
  for (Eigen::Index i = 0; i < v.size(); ++i) l = boost::multiprecision::lcm(l, denominator(v[i]));
  mpz_int g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const mpz_int k = numerator(v[i]) * (l / denominator(v[i]));
    g = boost::multiprecision::gcd(g, k);
  }
  if (g == 0) throw Error(ErrorKind::InvalidInput, "zero vector has no primitive representative");
  QVec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = Rational(numerator(v[i]) * (l / denominator(v[i])) / g);
  return out;
}

namespace {

bool is_primitive_integer(const QVec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (denominator(v[i]) != 1) return false;
  return primitive_integer_vector(v) == v;
}

}  // namespace

LatticePolytope lattice_polytope_from_halfspaces(const std::vector<QVec>& normals, const std::vector<Rational>& offsets) {
  for (const auto& n : normals) {
    bool zero = true;
    for (Eigen::Index i = 0; i < n.size(); ++i)
      if (n[i] != 0) zero = false;
    if (zero) throw Error(ErrorKind::NonPrimitiveNormal, "zero normal");
    if (!is_primitive_integer(n)) throw Error(ErrorKind::NonPrimitiveNormal, "normal is not a primitive integer vector");
  }
  return LatticePolytope::from_halfspaces(normals, offsets);
}

LatticePolytope lattice_polytope_from_vertices(const std::vector<QVec>& points) {
  return LatticePolytope::from_vertices(points);
}

bool has_primitive_normals(const LatticePolytope& P) {
  return std::all_of(P.facets().begin(), P.facets().end(),
                     [](const Facet<Rational>& f) { return is_primitive_integer(f.normal); });
}

std::vector<Simplex<Rational>> boundary_simplices(const LatticePolytope& P) {
  std::vector<Simplex<Rational>> out;
  if (P.dim() == 1) {
    for (const auto& f : P.facets()) out.push_back({f.vertices, Rational(1)});
    return out;
  }
  for (const auto& f : P.facets()) {
    // The edge direction w = (-v2, v1) is primitive, and the edge equals k w; its lattice length is |k|.
    QVec w(2);
    w[0] = -f.normal[1];
    w[1] = f.normal[0];
    const QVec e = f.vertices[1] - f.vertices[0];
    const Rational k = w[0] != 0 ? Rational(e[0] / w[0]) : Rational(e[1] / w[1]);
    out.push_back({f.vertices, abs_of(k)});
  }
  return out;
}

Rational boundary_mass(const LatticePolytope& P) {
  Rational m = 0;
  for (const auto& s : boundary_simplices(P)) m += s.measure;
  return m;
}

namespace {

long factorial(int n) {
  long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

Rational self_intersection(const LatticePolytope& P) { return Rational(factorial(P.dim())) * P.volume(); }

Rational canonical_degree(const LatticePolytope& P) { return -Rational(factorial(P.dim() - 1)) * boundary_mass(P); }

template class Polytope<Rational>;
template class Polytope<double>;
template std::vector<Simplex<Rational>> triangulate(const Polytope<Rational>&);
template std::vector<Simplex<double>> triangulate(const Polytope<double>&);
template double simplex_volume(const std::vector<Vec<double>>&);

}  // namespace mulab
