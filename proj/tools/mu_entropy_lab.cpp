#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mulab/acceptance.hpp"
#include "mulab/errors.hpp"
#include "mulab/geodesic_ray.hpp"
#include "mulab/io.hpp"
#include "mulab/na_entropy.hpp"
#include "mulab/optimizer.hpp"
#include "mulab/parallel.hpp"
#include "mulab/toric_metric.hpp"

using namespace mulab;
using io::Convention;
using io::json;
using Eigen::VectorXd;

namespace {

constexpr int exit_verify = 1;
constexpr int exit_schema = 2;
constexpr int exit_numeric = 3;

struct Options {
  std::string format;
  std::string output;
  int threads = 0;

  std::string polytope, q, direction, perturb, f;
  double tau = 0.0, lambda = 0.0, mna = 0.0, kappa = 0.01, a = 1.0;
  std::optional<double> cna_tau;
  std::vector<double> xi;
  std::string grid;
  double from = -40.0, to = 0.0;
  int steps = 400, multistart = 4, pieces = 3, restarts = 16, nodes = 128;
  std::uint64_t seed = 7;
  std::int64_t samples = 1000000, grid_cells = 0;
  double tmax = 40.0, eps = 0.0;
  std::vector<std::string> criteria;
};

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(const std::vector<double>& values) { rows_.push_back(values); }
  std::string str() const {
    std::ostringstream s;
    for (std::size_t i = 0; i < header_.size(); ++i) s << (i ? "," : "") << header_[i];
    s << "\n";
    char buf[64];
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", r[i]);
        s << (i ? "," : "") << buf;
      }
      s << "\n";
    }
    return s.str();
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

struct Output {
  std::optional<json> doc;
  std::optional<Csv> table;
};

LatticePolytope load_polytope(const Options& o) {
  if (o.polytope.empty()) throw Error(ErrorKind::SchemaError, "--polytope is required");
  return io::polytope_from_json(io::read_json_file(o.polytope));
}

PLConvexFunction load_pl(const std::string& path, int dim, const char* flag) {
  if (path.empty()) throw Error(ErrorKind::SchemaError, std::string(flag) + " is required");
  return io::pl_from_json(io::read_json_file(path), dim);
}

SymplecticPotential1D load_potential(const Options& o) {
  VectorXd c;
  if (!o.perturb.empty()) c = io::chebyshev_from_json(io::read_json_file(o.perturb));
  return SymplecticPotential1D(o.a, c);
}

VectorXd xi_vector(const Options& o, int dim) {
  if (o.xi.size() == 1 && dim > 1) return VectorXd::Constant(dim, o.xi[0]);
  if (static_cast<int>(o.xi.size()) != dim) throw Error(ErrorKind::SchemaError, "--xi has the wrong dimension");
  return Eigen::Map<const VectorXd>(o.xi.data(), dim);
}

// "tau=0:10:0.01"
std::vector<double> parse_grid(const std::string& spec, const std::string& name) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || spec.substr(0, eq) != name)
    throw Error(ErrorKind::SchemaError, "--grid must look like " + name + "=start:stop:step");
  std::vector<double> parts;
  std::stringstream ss(spec.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      parts.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorKind::SchemaError, "cannot read grid entry \"" + item + "\"");
    }
  }
  if (parts.size() != 3 || !(parts[2] > 0) || parts[1] < parts[0])
    throw Error(ErrorKind::SchemaError, "--grid needs start <= stop and a positive step");
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(parts[0] + i * parts[2]);
  return out;
}

Output cmd_na_entropy(const Options& o) {
  const auto P = load_polytope(o);
  const ToricTestConfig tc(P, load_pl(o.q, P.dim(), "--q"));
  if (!o.grid.empty()) {
    const auto taus = parse_grid(o.grid, "tau");
    std::vector<NAEntropy> vals(taus.size());
    parallel_for(static_cast<int>(taus.size()), [&](int i) { vals[i] = na_entropy(tc, {o.lambda, taus[i]}); });
    Csv csv({"tau", "mu", "sigma", "mu_lambda"});
    json rows = json::array();
    for (std::size_t i = 0; i < taus.size(); ++i) {
      csv.row({taus[i], vals[i].mu, vals[i].sigma, vals[i].mu_lambda});
      rows.push_back({{"tau", taus[i]}, {"mu", vals[i].mu}, {"sigma", vals[i].sigma}, {"mu_lambda", vals[i].mu_lambda}});
    }
    io::TaggedOutput out;
    out.add("lambda", o.lambda, Convention::Parameter);
    out.add("rows", rows, Convention::Entropy2Pi);
    return {out.to_json(), csv};
  }
  const auto e = na_entropy(tc, {o.lambda, o.tau});
  io::TaggedOutput out;
  out.add("mu", e.mu, Convention::Entropy2Pi);
  out.add("sigma", e.sigma, Convention::SigmaLog);
  out.add("mu_lambda", e.mu_lambda, Convention::Entropy2Pi);
  out.add("tau", o.tau, Convention::Parameter);
  out.add("lambda", o.lambda, Convention::Parameter);
  Csv csv({"tau", "mu", "sigma", "mu_lambda"});
  csv.row({o.tau, e.mu, e.sigma, e.mu_lambda});
  return {out.to_json(), csv};
}

Output cmd_vector(const Options& o) {
  const auto P = load_polytope(o);
  const VectorXd xi = xi_vector(o, P.dim());
  const double v = vector_mu_entropy(P, xi, o.lambda);
  const VectorXd g = vector_mu_entropy_gradient(P, xi, o.lambda);
  io::TaggedOutput out;
  out.add("value", v, Convention::Entropy2Pi);
  out.add("gradient", io::to_json(g), Convention::DualVector);
  out.add("xi", io::to_json(xi), Convention::DualVector);
  out.add("lambda", o.lambda, Convention::Parameter);
  Csv csv({"value"});
  csv.row({v});
  return {out.to_json(), csv};
}

Output cmd_futaki(const Options& o) {
  const auto P = load_polytope(o);
  const VectorXd xi = xi_vector(o, P.dim());
  const double v = mu_futaki(P, xi, load_pl(o.direction, P.dim(), "--direction"), o.lambda);
  io::TaggedOutput out;
  out.add("value", v, Convention::FutakiMinusSlope);
  out.add("xi", io::to_json(xi), Convention::DualVector);
  out.add("lambda", o.lambda, Convention::Parameter);
  Csv csv({"value"});
  csv.row({v});
  return {out.to_json(), csv};
}

Output cmd_dh(const Options& o) {
  const auto P = load_polytope(o);
  const ToricTestConfig tc(P, load_pl(o.q, P.dim(), "--q"));
  const auto dh = dh_measure(tc);
  json pieces = json::array(), masses = json::array();
  Csv csv({"t_left", "t_right", "density_left", "density_slope"});
  for (std::size_t i = 0; i < dh.densities.size(); ++i) {
    pieces.push_back({{"t_left", dh.breakpoints[i]},
                      {"t_right", dh.breakpoints[i + 1]},
                      {"density_left", dh.densities[i][0]},
                      {"density_slope", dh.densities[i][1]}});
    csv.row({dh.breakpoints[i], dh.breakpoints[i + 1], dh.densities[i][0], dh.densities[i][1]});
  }
  for (const auto& [t, m] : dh.point_masses) masses.push_back({{"t", t}, {"mass", m}});
  io::TaggedOutput out;
  out.add("pieces", pieces, Convention::LebesgueMoment);
  out.add("point_masses", masses, Convention::LebesgueMoment);
  out.add("total_mass", dh.total_mass(), Convention::LebesgueMoment);
  out.add("barycentre", dh.moment(1) / dh.total_mass(), Convention::LebesgueMoment);
  return {out.to_json(), csv};
}

Output cmd_norm2(const Options& o) {
  const auto P = load_polytope(o);
  const ToricTestConfig tc(P, load_pl(o.q, P.dim(), "--q"));
  const double n2 = norm_squared(tc);
  io::TaggedOutput out;
  out.add("norm2", n2, Convention::DHFactorial);
  Csv csv({"norm2"});
  csv.row({n2});
  return {out.to_json(), csv};
}

Output cmd_cna(const Options& o) {
  const auto P = load_polytope(o);
  const ToricTestConfig tc(P, load_pl(o.q, P.dim(), "--q"));
  const double L = to_double(self_intersection(P));
  const double n2 = norm_squared(tc);
  const auto best = max_c_na(L, n2, o.mna);
  io::TaggedOutput out;
  out.add("self_intersection", L, Convention::IntersectionFactorial);
  out.add("norm2", n2, Convention::DHFactorial);
  out.add("m_na", o.mna, Convention::Parameter);
  out.add("tau_max", best.tau, Convention::Parameter);
  out.add("value_max", best.value, Convention::IntersectionFactorial);
  Csv csv({"tau", "c_na"});
  if (o.cna_tau) {
    const double v = c_na(L, n2, *o.cna_tau, o.mna);
    out.add("tau", *o.cna_tau, Convention::Parameter);
    out.add("value", v, Convention::IntersectionFactorial);
    csv.row({*o.cna_tau, v});
  }
  if (!o.grid.empty()) {
    for (double t : parse_grid(o.grid, "tau")) csv.row({t, c_na(L, n2, t, o.mna)});
  }
  if (!o.cna_tau && o.grid.empty()) csv.row({best.tau, best.value});
  return {out.to_json(), csv};
}

Output cmd_scan(const Options& o) {
  const auto P = load_polytope(o);
  const auto r = bifurcation_scan(P, o.from, o.to, o.steps, o.multistart, o.seed);
  std::vector<std::string> header = {"lambda"};
  for (int i = 0; i < P.dim(); ++i) header.push_back("xi" + std::to_string(i));
  header.insert(header.end(), {"value", "min_eig"});
  Csv csv(header);
  json points = json::array();
  for (const auto& p : r.points) {
    json maxima = json::array();
    for (const auto& c : p.maxima) {
      std::vector<double> row = {p.lambda};
      for (Eigen::Index i = 0; i < c.xi.size(); ++i) row.push_back(c.xi[i]);
      row.push_back(c.value);
      row.push_back(c.hessian_min_eig);
      csv.row(row);
      maxima.push_back({{"xi", io::to_json(c.xi)}, {"value", c.value}, {"min_eig", c.hessian_min_eig}});
    }
    points.push_back({{"lambda", p.lambda}, {"maxima", maxima}, {"zero_max_eig", p.zero_max_eig}});
  }
  io::TaggedOutput out;
  out.add("transitions", r.transitions, Convention::Parameter);
  out.add("zero_is_critical", r.zero_is_critical, Convention::Count);
  out.add("points", points, Convention::Entropy2Pi);
  return {out.to_json(), csv};
}

Output cmd_optimize(const Options& o) {
  const auto P = load_polytope(o);
  const auto r = optimal_degeneration_search(P, o.lambda, o.pieces, o.restarts, o.seed);
  io::TaggedOutput out;
  out.add("value", r.value, Convention::Entropy2Pi);
  out.add("tau", r.tau, Convention::Parameter);
  out.add("q", io::pl_to_json(r.q), Convention::MomentCoordinate);
  out.add("iterations", r.iterations, Convention::Count);
  out.add("converged", r.converged, Convention::Count);
  Csv csv({"value", "tau"});
  csv.row({r.value, r.tau});
  return {out.to_json(), csv};
}

Output cmd_metric_entropy(const Options& o) {
  const auto u = load_potential(o);
  const auto m = measure_1d(o.a, o.nodes);
  const double w0 = w_entropy(u, m, {VectorXd::Zero(m.size())}, o.lambda);
  const auto c = critical_momentum(u, m, o.lambda);
  io::TaggedOutput out;
  out.add("w_at_zero", w0, Convention::AbreuPi);
  out.add("mu_entropy", c.value, Convention::AbreuPi);
  out.add("f_star_nodes", io::to_json(c.f.values), Convention::AbreuPi);
  out.add("nodes", io::to_json(m.nodes), Convention::MomentCoordinate);
  out.add("residual", c.residual, Convention::AbreuPi);
  out.add("iterations", c.iterations, Convention::Count);
  Csv csv({"x", "f_star"});
  for (int i = 0; i < m.size(); ++i) csv.row({m.nodes[i], c.f.values[i]});
  return {out.to_json(), csv};
}

Output cmd_h_entropy(const Options& o) {
  const auto u = load_potential(o);
  const auto m = measure_1d(o.a, o.nodes);
  const double H = h_entropy(u, m);
  const double W = w_entropy(u, m, ricci_potential(u, m), 2 * std::numbers::pi);
  io::TaggedOutput out;
  out.add("h_entropy", H, Convention::AbreuPi);
  out.add("w_2pi_of_h", W, Convention::AbreuPi);
  Csv csv({"h_entropy", "w_2pi_of_h"});
  csv.row({H, W});
  return {out.to_json(), csv};
}

Output cmd_calabi(const Options& o) {
  const auto u = load_potential(o);
  const auto m = measure_1d(o.a, o.nodes);
  const double c = calabi(u, m);
  io::TaggedOutput out;
  out.add("calabi", c, Convention::AbreuPi);
  Csv csv({"calabi"});
  csv.row({c});
  return {out.to_json(), csv};
}

Output cmd_wkappa(const Options& o) {
  const auto u = load_potential(o);
  const auto m = measure_1d(o.a, o.nodes);
  Momentum1D f{scalar_curvature(u, m)};
  if (!o.f.empty()) f = momentum_from(m, ChebyshevSeries(o.a, io::chebyshev_from_json(io::read_json_file(o.f))));
  const double wk = w_kappa(u, m, f, o.kappa), we = w_ext(u, m, f);
  io::TaggedOutput out;
  out.add("w_kappa", wk, Convention::AbreuPi);
  out.add("w_ext", we, Convention::AbreuPi);
  out.add("kappa", o.kappa, Convention::Parameter);
  Csv csv({"kappa", "w_kappa", "w_ext"});
  csv.row({o.kappa, wk, we});
  return {out.to_json(), csv};
}

Output cmd_ray(const Options& o) {
  if (o.steps < 1) throw Error(ErrorKind::InvalidInput, "--steps must be positive");
  const auto u = load_potential(o);
  const ToricRay ray{u, load_pl(o.q, 1, "--q"), o.tau, o.eps};
  std::vector<double> ts;
  for (int i = 0; i <= o.steps; ++i) ts.push_back(o.tmax * i / o.steps);
  const auto tr = w_along_ray(ray, o.lambda, ts);
  Csv csv({"t", "W", "c0", "c1"});
  for (std::size_t i = 0; i < ts.size(); ++i) csv.row({ts[i], tr.w[i], tr.c0[i], tr.c1[i]});
  io::TaggedOutput out;
  out.add("t", tr.t_grid, Convention::RayTime);
  out.add("W", tr.w, Convention::AbreuPi);
  out.add("c0", tr.c0, Convention::LebesgueMoment);
  out.add("c1", tr.c1, Convention::LebesgueMoment);
  out.add("max_violation", tr.max_violation, Convention::AbreuPi);
  out.add("drift_c0", tr.drift_c0, Convention::LebesgueMoment);
  out.add("drift_c1", tr.drift_c1, Convention::LebesgueMoment);
  return {out.to_json(), csv};
}

Output cmd_oracle(const Options& o) {
  const auto P = load_polytope(o);
  auto q = load_pl(o.q, P.dim(), "--q");
  const auto e = mc_oracle(P, q, o.tau, o.samples, o.seed);
  const auto b = bundle(P, q, o.tau);
  io::TaggedOutput out;
  out.add("I0", b.I0, Convention::LebesgueMoment);
  out.add("I1", b.I1, Convention::LebesgueMoment);
  out.add("B0", b.B0, Convention::LatticeBoundary);
  out.add("mc_I0", e.value.I0, Convention::LebesgueMoment);
  out.add("mc_I1", e.value.I1, Convention::LebesgueMoment);
  out.add("mc_B0", e.value.B0, Convention::LatticeBoundary);
  out.add("se_I0", e.se_I0, Convention::LebesgueMoment);
  out.add("se_I1", e.se_I1, Convention::LebesgueMoment);
  out.add("se_B0", e.se_B0, Convention::LatticeBoundary);
  out.add("samples", o.samples, Convention::Count);
  out.add("seed", o.seed, Convention::Count);
  Csv csv({"quantity", "kernel", "mc", "se"});
  csv.row({0, b.I0, e.value.I0, e.se_I0});
  csv.row({1, b.I1, e.value.I1, e.se_I1});
  csv.row({2, b.B0, e.value.B0, e.se_B0});
  return {out.to_json(), csv};
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.output);
  if (!f) throw Error(ErrorKind::SchemaError, "cannot write " + o.output);
  f << text;
}

int run_verify(const Options& o) {
  auto ids = o.criteria.empty() ? acceptance::criterion_ids() : o.criteria;
  int failed = 0;
  json rows = json::array();
  std::string table;
  for (const auto& id : ids) {
    const auto r = acceptance::run_criterion(id);
    failed += !r.pass;
    table += acceptance::format_line(r) + "\n";
    rows.push_back({{"id", r.id}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
    if (o.format != "json" && o.output.empty()) {
      std::cout << acceptance::format_line(r) << std::endl;
    }
  }
  if (o.format == "json") emit(o, json{{"criteria", rows}, {"failed", failed}}.dump(2) + "\n");
  else if (!o.output.empty()) emit(o, table);
  return failed ? exit_verify : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toric mu-entropy laboratory"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", o.output, "write to a file instead of stdout");
  app.add_option("--threads", o.threads, "worker thread cap (MU_LAB_THREADS)")->check(CLI::NonNegativeNumber);

  auto polytope = [&](CLI::App* s) { s->add_option("--polytope", o.polytope, "polytope JSON")->required(); };
  auto pl = [&](CLI::App* s) { s->add_option("--q", o.q, "PL function JSON")->required(); };
  auto metric = [&](CLI::App* s) {
    s->add_option("--a", o.a, "length of the moment interval");
    s->add_option("--perturb", o.perturb, "Chebyshev coefficients JSON");
    s->add_option("--nodes", o.nodes, "Clenshaw-Curtis order")->check(CLI::Range(8, 4096));
  };

  std::vector<std::pair<CLI::App*, std::function<Output(const Options&)>>> cmds;
  auto add = [&](const char* name, const char* desc, std::function<Output(const Options&)> fn) {
    auto* s = app.add_subcommand(name, desc);
    cmds.push_back({s, std::move(fn)});
    return s;
  };

  auto* na = add("na-entropy", "non-archimedean mu-entropy of a toric test configuration", cmd_na_entropy);
  polytope(na);
  pl(na);
  na->add_option("--tau", o.tau);
  na->add_option("--lambda", o.lambda);
  na->add_option("--grid", o.grid, "tau=start:stop:step");

  auto* vec = add("vector", "mu-entropy of a vector field", cmd_vector);
  polytope(vec);
  vec->add_option("--xi", o.xi)->delimiter(',')->required();
  vec->add_option("--lambda", o.lambda);

  auto* fut = add("futaki", "mu-Futaki invariant of a direction", cmd_futaki);
  polytope(fut);
  fut->add_option("--xi", o.xi)->delimiter(',')->required();
  fut->add_option("--direction", o.direction, "PL function JSON")->required();
  fut->add_option("--lambda", o.lambda);

  auto* dh = add("dh", "Duistermaat-Heckman measure", cmd_dh);
  polytope(dh);
  pl(dh);

  auto* n2 = add("norm2", "squared norm of a test configuration", cmd_norm2);
  polytope(n2);
  pl(n2);

  auto* cna = add("cna", "Donaldson-type quadratic and its maximum", cmd_cna);
  polytope(cna);
  pl(cna);
  cna->add_option("--mna", o.mna)->required();
  cna->add_option("--tau", o.cna_tau);
  cna->add_option("--grid", o.grid, "tau=start:stop:step");

  auto* scan = add("scan-lambda", "critical vector fields along a lambda grid", cmd_scan);
  polytope(scan);
  scan->add_option("--from", o.from);
  scan->add_option("--to", o.to);
  scan->add_option("--steps", o.steps)->check(CLI::PositiveNumber);
  scan->add_option("--multistart", o.multistart)->check(CLI::PositiveNumber);
  scan->add_option("--seed", o.seed);

  auto* opt = add("optimize", "search for an optimal degeneration", cmd_optimize);
  polytope(opt);
  opt->add_option("--lambda", o.lambda);
  opt->add_option("--pieces", o.pieces)->check(CLI::PositiveNumber);
  opt->add_option("--restarts", o.restarts)->check(CLI::NonNegativeNumber);
  opt->add_option("--seed", o.seed);

  auto* me = add("metric-entropy", "W-entropy at zero and mu-entropy of a metric on CP^1", cmd_metric_entropy);
  metric(me);
  me->add_option("--lambda", o.lambda);

  auto* he = add("h-entropy", "H-entropy of a metric with a = 2", cmd_h_entropy);
  o.a = 1.0;
  metric(he);

  auto* ca = add("calabi", "Calabi functional", cmd_calabi);
  metric(ca);

  auto* wk = add("wkappa", "W_kappa and its extremal limit", cmd_wkappa);
  metric(wk);
  wk->add_option("--kappa", o.kappa);
  wk->add_option("--f", o.f, "Chebyshev coefficients of the momentum; default s");

  auto* ray = add("ray", "W-entropy along a geodesic ray", cmd_ray);
  metric(ray);
  ray->add_option("--q", o.q, "PL function JSON")->required();
  ray->add_option("--tau", o.tau, "default 1");
  ray->add_option("--lambda", o.lambda);
  ray->add_option("--tmax", o.tmax)->check(CLI::PositiveNumber);
  ray->add_option("--steps", o.steps)->check(CLI::PositiveNumber);
  ray->add_option("--eps", o.eps, "mollifier width, default 1e-3 a");

  auto* orc = add("oracle", "Monte Carlo check of the integral kernel", cmd_oracle);
  polytope(orc);
  pl(orc);
  orc->add_option("--tau", o.tau);
  orc->add_option("--samples", o.samples)->check(CLI::PositiveNumber);
  orc->add_option("--seed", o.seed);

  auto* ver = app.add_subcommand("verify", "run the acceptance suite");
  ver->add_option("--criterion", o.criteria, "restrict to these ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_schema;
  }
  if (o.threads > 0) set_thread_count(o.threads);
  if (he->parsed() && he->count("--a") == 0) o.a = 2.0;
  if (ray->parsed() && ray->count("--steps") == 0) o.steps = 200;
  if (ray->parsed() && ray->count("--tau") == 0) o.tau = 1.0;

  try {
    if (ver->parsed()) return run_verify(o);
    for (auto& [sub, fn] : cmds) {
      if (!sub->parsed()) continue;
      const Output out = fn(o);
      std::string format = o.format;
      if (format.empty()) format = (sub == ray) ? "csv" : "json";
      if (format == "csv") emit(o, out.table ? out.table->str() : std::string());
      else emit(o, out.doc->dump(2) + "\n");
      return 0;
    }
  } catch (const Error& e) {
    const json diag = {{"error", to_string(e.kind())}, {"message", e.what()}};
    std::cout << diag.dump(2) << "\n";
    std::cerr << e.what() << "\n";
    return is_input_error(e.kind()) ? exit_schema : exit_numeric;
  } catch (const std::exception& e) {
    const json diag = {{"error", "NumericFailure"}, {"message", e.what()}};
    std::cout << diag.dump(2) << "\n";
    std::cerr << e.what() << "\n";
    return exit_numeric;
  }
  return 0;
}
