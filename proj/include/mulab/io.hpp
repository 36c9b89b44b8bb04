#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "mulab/exp_integrals.hpp"
#include "mulab/polytope.hpp"

namespace mulab::io {

using nlohmann::json;

/// Reads and parses a JSON file; SchemaError on any failure.
json read_json_file(const std::string& path);

/// Integer, floating (taken exactly) or "p/q" string.
Rational rational_from_json(const json& j);

/// {"dim": n, "halfspaces": [{"normal": [...], "offset": r}, ...]} or {"dim": n, "vertices": [[...], ...]}.
/// Halfspaces read as <normal, x> <= offset.
LatticePolytope polytope_from_json(const json& j);
json polytope_to_json(const LatticePolytope& P);

/// {"pieces": [{"gradient": [...], "constant": c}, ...]}
PLConvexFunction pl_from_json(const json& j, int dim);
json pl_to_json(const PLConvexFunction& q);

/// {"coefficients": [...]}; Chebyshev coefficients on [0, a].
Eigen::VectorXd chebyshev_from_json(const json& j);

enum class Convention {
  LebesgueMoment,        // integrals over P against dx in moment coordinates; int omega^n/n! = vol(P)
  LatticeBoundary,       // boundary integrals against the lattice-normalized facet measure
  IntersectionFactorial, // (L^n) = n! vol(P), (K L^{n-1}) = -(n-1)! |dP|
  Entropy2Pi,            // -2 pi int_dP e^f / int_P e^f (+ lambda sigma); [0, a] at f = 0 gives -4 pi / a
  SigmaLog,              // n + <f>_f - log int e^f
  FutakiMinusSlope,      // minus the tau-derivative at 0
  DHFactorial,           // n! times the DH variance
  AbreuPi,               // s = -pi (1/u'')'', |grad f|^2 = pi f'^2 / u''
  RayTime,               // u_t = u0 + t tau q_eps
  DualVector,            // xi, gradients, Hessians in the dual lattice coordinates
  MomentCoordinate,      // positions in P
  Parameter,             // echoed inputs (lambda, tau, kappa, ...)
  Count,                 // integers
};

const char* tag(Convention c);
std::vector<Convention> all_conventions();

/// Output object whose every numeric field is registered with a convention tag under "conventions".
class TaggedOutput {
 public:
  void add(const std::string& key, const json& value, Convention c);
  json to_json() const;

 private:
  json values_ = json::object();
  json conventions_ = json::object();
};

json to_json(const Eigen::VectorXd& v);
json to_json(const Eigen::MatrixXd& m);

}  // namespace mulab::io
