#include "mulab/io.hpp"

#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include "mulab/errors.hpp"

namespace mulab::io {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorKind::SchemaError, what); }

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) schema(where + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema(where + " must be finite");
  return v;
}

Eigen::VectorXd number_array(const json& j, const std::string& where) {
  if (!j.is_array()) schema(where + " must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], where);
  return v;
}

QVec rational_array(const json& j, const std::string& where) {
  if (!j.is_array()) schema(where + " must be an array");
  QVec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = rational_from_json(j[i]);
  return v;
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) schema("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    schema(path + ": " + e.what());
  }
}

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) schema("rational must be finite");
    return Rational(v);
  }
  if (j.is_string()) {
    static const std::regex re(R"(\s*([+-]?\d+)\s*(/\s*(\d+))?\s*)");
    std::smatch m;
    const std::string s = j.get<std::string>();
    if (!std::regex_match(s, m, re)) schema("cannot read \"" + s + "\" as a rational");
    Rational num(m[1].str());
    if (m[3].matched) {
      const Rational den(m[3].str());
      if (den == 0) schema("zero denominator in \"" + s + "\"");
      num /= den;
    }
    return num;
  }
  schema("rational must be an integer, a number or a \"p/q\" string");
}

LatticePolytope polytope_from_json(const json& j) {
  if (!j.is_object()) schema("polytope must be an object");
  const json& d = require(j, "dim");
  if (!d.is_number_integer() || d.get<int>() < 1 || d.get<int>() > 2) schema("\"dim\" must be 1 or 2");
  const int dim = d.get<int>();
  const bool hs = j.contains("halfspaces"), vs = j.contains("vertices");
  if (hs == vs) schema("polytope needs exactly one of \"halfspaces\" and \"vertices\"");
  if (hs) {
    const json& list = j.at("halfspaces");
    if (!list.is_array() || list.empty()) schema("\"halfspaces\" must be a non-empty array");
    std::vector<QVec> normals;
    std::vector<Rational> offsets;
    for (const auto& h : list) {
      QVec n = rational_array(require(h, "normal"), "normal");
      if (n.size() != dim) schema("normal has the wrong dimension");
      normals.push_back(std::move(n));
      offsets.push_back(rational_from_json(require(h, "offset")));
    }
    return lattice_polytope_from_halfspaces(normals, offsets);
  }
  const json& list = j.at("vertices");
  if (!list.is_array() || list.empty()) schema("\"vertices\" must be a non-empty array");
  std::vector<QVec> pts;
  for (const auto& p : list) {
    QVec v = rational_array(p, "vertex");
    if (v.size() != dim) schema("vertex has the wrong dimension");
    pts.push_back(std::move(v));
  }
  return lattice_polytope_from_vertices(pts);
}

namespace {

json rational_to_json(const Rational& r) {
  if (denominator(r) == 1) {
    std::ostringstream s;
    s << numerator(r);
    return json::parse(s.str());
  }
  std::ostringstream s;
  s << r;
  return s.str();
}

}  // namespace

json polytope_to_json(const LatticePolytope& P) {
  json out = {{"dim", P.dim()}, {"vertices", json::array()}, {"halfspaces", json::array()}};
  for (const auto& v : P.vertices()) {
    json p = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) p.push_back(rational_to_json(v[i]));
    out["vertices"].push_back(p);
  }
  for (const auto& f : P.facets()) {
    json n = json::array();
    for (Eigen::Index i = 0; i < f.normal.size(); ++i) n.push_back(rational_to_json(f.normal[i]));
    out["halfspaces"].push_back({{"normal", n}, {"offset", rational_to_json(f.offset)}});
  }
  return out;
}

PLConvexFunction pl_from_json(const json& j, int dim) {
  const json& list = require(j, "pieces");
  if (!list.is_array() || list.empty()) schema("\"pieces\" must be a non-empty array");
  std::vector<AffinePiece> pieces;
  for (const auto& p : list) {
    Eigen::VectorXd g = number_array(require(p, "gradient"), "gradient");
    if (g.size() != dim) schema("gradient has the wrong dimension");
    pieces.push_back({std::move(g), number(require(p, "constant"), "constant")});
  }
  return PLConvexFunction(pieces);
}

json pl_to_json(const PLConvexFunction& q) {
  json out = {{"pieces", json::array()}};
  for (const auto& p : q.pieces()) out["pieces"].push_back({{"gradient", to_json(p.gradient)}, {"constant", p.constant}});
  return out;
}

Eigen::VectorXd chebyshev_from_json(const json& j) {
  return number_array(require(j, "coefficients"), "coefficients");
}

const char* tag(Convention c) {
  switch (c) {
    case Convention::LebesgueMoment: return "lebesgue_moment";
    case Convention::LatticeBoundary: return "lattice_boundary";
    case Convention::IntersectionFactorial: return "intersection_factorial";
    case Convention::Entropy2Pi: return "entropy_2pi";
    case Convention::SigmaLog: return "sigma_log";
    case Convention::FutakiMinusSlope: return "futaki_minus_slope";
    case Convention::DHFactorial: return "dh_factorial";
    case Convention::AbreuPi: return "abreu_pi";
    case Convention::RayTime: return "ray_time";
    case Convention::DualVector: return "dual_vector";
    case Convention::MomentCoordinate: return "moment_coordinate";
    case Convention::Parameter: return "parameter";
    case Convention::Count: return "count";
  }
  return "unknown";
}

std::vector<Convention> all_conventions() {
  return {Convention::LebesgueMoment, Convention::LatticeBoundary, Convention::IntersectionFactorial,
          Convention::Entropy2Pi,     Convention::SigmaLog,        Convention::FutakiMinusSlope,
          Convention::DHFactorial,    Convention::AbreuPi,         Convention::RayTime,
          Convention::DualVector,     Convention::MomentCoordinate, Convention::Parameter,
          Convention::Count};
}

void TaggedOutput::add(const std::string& key, const json& value, Convention c) {
  values_[key] = value;
  conventions_[key] = tag(c);
}

json TaggedOutput::to_json() const {
  json out = values_;
  out["conventions"] = conventions_;
  return out;
}

json to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Eigen::VectorXd(m.row(i).transpose())));
  return out;
}

}  // namespace mulab::io
