#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "mulab/errors.hpp"
#include "mulab/io.hpp"
#include "test_support.hpp"

using namespace mulab;
using namespace testing;
using io::json;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST_CASE("polytope schema") {
  const auto P = io::polytope_from_json(
      json::parse(R"({"dim":1,"halfspaces":[{"normal":[-1],"offset":0},{"normal":[1],"offset":1}]})"));
  CHECK(P.dim() == 1);
  CHECK(volume(P) == 1);

  const auto T = io::polytope_from_json(json::parse(R"({"dim":2,"vertices":[[0,0],[2,0],[0,"2"],[1,1]]})"));
  CHECK(T.vertices().size() == 3);
  CHECK(volume(T) == 2);

  const auto H = io::polytope_from_json(
      json::parse(R"({"dim":2,"halfspaces":[{"normal":[-1,0],"offset":0},{"normal":[0,-1],"offset":"1/2"},
                    {"normal":[1,1],"offset":"3/2"}]})"));
  CHECK(H.vertices().size() == 3);

  // Round trip through the emitted form, via either description.
  const json out = io::polytope_to_json(H);
  json by_vertices = {{"dim", 2}, {"vertices", out["vertices"]}};
  json by_halfspaces = {{"dim", 2}, {"halfspaces", out["halfspaces"]}};
  CHECK(volume(io::polytope_from_json(by_vertices)) == volume(H));
  CHECK(volume(io::polytope_from_json(by_halfspaces)) == volume(H));
}

TEST_CASE("schema errors") {
  auto parse = [](const char* s) { return [s] { return io::polytope_from_json(json::parse(s)); }; };
  CHECK(kind_of(parse(R"({"halfspaces":[]})")) == ErrorKind::SchemaError);
  CHECK(kind_of(parse(R"({"dim":3,"vertices":[[0,0,0]]})")) == ErrorKind::SchemaError);
  CHECK(kind_of(parse(R"({"dim":1,"vertices":[[0]],"halfspaces":[]})")) == ErrorKind::SchemaError);
  CHECK(kind_of(parse(R"({"dim":1,"vertices":[[0,1]]})")) == ErrorKind::SchemaError);
  CHECK(kind_of(parse(R"({"dim":1,"vertices":[["x"]]})")) == ErrorKind::SchemaError);
  CHECK(kind_of(parse(R"({"dim":1,"vertices":[["1/0"]]})")) == ErrorKind::SchemaError);
  CHECK(kind_of(parse(R"({"dim":1,"halfspaces":[{"normal":[-2],"offset":0},{"normal":[1],"offset":1}]})")) ==
        ErrorKind::NonPrimitiveNormal);
  CHECK(kind_of(parse(R"({"dim":1,"halfspaces":[{"normal":[1],"offset":1}]})")) == ErrorKind::UnboundedRegion);
  CHECK(kind_of([] { return io::pl_from_json(json::parse(R"({"pieces":[{"gradient":[1,2],"constant":0}]})"), 1); }) ==
        ErrorKind::SchemaError);
  CHECK(kind_of([] { return io::pl_from_json(json::parse(R"({"pieces":[]})"), 1); }) == ErrorKind::SchemaError);
  CHECK(kind_of([] { return io::chebyshev_from_json(json::parse(R"({"coefficients":[1,"a"]})")); }) ==
        ErrorKind::SchemaError);
  CHECK(kind_of([] { return io::read_json_file("/nonexistent/file.json"); }) == ErrorKind::SchemaError);
  const std::string path = "test_io_broken.json";
  std::ofstream(path) << "{\"dim\": ";
  CHECK(kind_of([&] { return io::read_json_file(path); }) == ErrorKind::SchemaError);
  std::remove(path.c_str());
  CHECK(is_input_error(ErrorKind::SchemaError));
  CHECK(!is_input_error(ErrorKind::NonConvergence));
}

TEST_CASE("rationals") {
  CHECK(io::rational_from_json(json(3)) == 3);
  CHECK(io::rational_from_json(json("-7/4")) == Rational(-7) / 4);
  CHECK(io::rational_from_json(json(0.5)) == Rational(1) / 2);
  CHECK(io::rational_from_json(json(" 12 ")) == 12);
}

TEST_CASE("PL functions and Chebyshev coefficients") {
  const auto q = io::pl_from_json(
      json::parse(R"({"pieces":[{"gradient":[1],"constant":-1},{"gradient":[-1],"constant":0}]})"), 1);
  CHECK(q.pieces().size() == 2);
  CHECK(q(dv({0.25})) == doctest::Approx(-0.25));
  const auto back = io::pl_from_json(io::pl_to_json(q), 1);
  CHECK(back(dv({0.8})) == q(dv({0.8})));
  const auto c = io::chebyshev_from_json(json::parse(R"({"coefficients":[0, 0, 0.01]})"));
  CHECK(c.size() == 3);
  CHECK(c[2] == 0.01);
}

TEST_CASE("tagged output") {
  io::TaggedOutput out;
  out.add("value", -1.5, io::Convention::Entropy2Pi);
  out.add("xi", io::to_json(dv({1, 2})), io::Convention::DualVector);
  const json j = out.to_json();
  CHECK(j["value"] == -1.5);
  CHECK(j["conventions"]["value"] == "entropy_2pi");
  CHECK(j["conventions"]["xi"] == "dual_vector");
  std::set<std::string> tags;
  for (auto c : io::all_conventions()) tags.insert(io::tag(c));
  CHECK(tags.size() == io::all_conventions().size());
  CHECK(!tags.count("unknown"));
}
