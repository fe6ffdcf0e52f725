#include "stl/config.hpp"

#include <doctest.h>

#include <fstream>
#include <string>

using namespace stl;

namespace {

void expect_error(const std::string& text, const std::string& needle) {
  try {
    parse_config_json(text);
    FAIL("expected a config error for: " << text);
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK_MESSAGE(msg.find(needle) != std::string::npos,
                  "message '" << msg << "' should mention '" << needle << "'");
  }
}

}  // namespace

TEST_CASE("minimal config uses the documented defaults") {
  const ExperimentConfig c = parse_config_json(R"({"epsilon_list":[0.125]})");
  CHECK(c.microstructure.alpha == 1.0);
  CHECK(c.microstructure.dimension == 2);
  CHECK(c.microstructure.radius_coefficient == 1.0);
  CHECK(c.microstructure.domain.xmin == 0.0);
  CHECK(c.microstructure.domain.xmax == 1.0);
  CHECK(c.f.kind == FunctionKind::Constant);
  CHECK(c.f.params[0] == 1.0);
  CHECK(c.g_outer.params[0] == 0.0);
  CHECK(c.h.kind == FunctionKind::SphereTraceConstant);
  CHECK(c.s_mode == SMode::Limit);
  CHECK(c.epsilon_list.size() == 1);
}

TEST_CASE("full config parses") {
  const ExperimentConfig c = parse_config_json(R"({
    "domain": {"xmin": -1.0, "xmax": 1.0, "ymin": 0.0, "ymax": 2.0},
    "alpha": 0.5,
    "dimension": 2,
    "radius_coefficient": 0.75,
    "epsilon_list": [0.25, 0.125, 0.0625],
    "f": {"kind": "cosine_product", "params": [2.0, 3.14, 3.14]},
    "g_outer": {"kind": "linear", "params": [1.0, 0.0, -1.0]},
    "h": {"kind": "sphere_trace_first_harmonic", "params": [1.0, 0.5, 0.0]},
    "mesh": {"h_far": 0.08, "min_segments": 24},
    "solver": {"rel_tol": 1e-11, "max_iter": 5000},
    "s_mode": "finite",
    "output_dir": "out"
  })");
  CHECK(c.microstructure.domain.area() == 4.0);
  CHECK(c.microstructure.alpha == 0.5);
  CHECK(c.epsilon_list.size() == 3);
  CHECK(c.f.kind == FunctionKind::CosineProduct);
  CHECK(c.h.kind == FunctionKind::SphereTraceFirstHarmonic);
  CHECK(c.mesh.h_far == 0.08);
  CHECK(c.mesh.min_segments == 24);
  CHECK(c.solver.rel_tol == 1e-11);
  CHECK(c.solver.max_iter == 5000);
  CHECK(c.s_mode == SMode::Finite);
  CHECK(c.output_dir == "out");
}

TEST_CASE("errors name the offending path") {
  expect_error(R"({"epsilon_list":[0.125],"bogus":1})", "$.bogus");
  expect_error(R"({})", "$.epsilon_list");
  expect_error(R"({"epsilon_list":[0.125,0.25]})", "$.epsilon_list");
  expect_error(R"({"epsilon_list":[0.125],"alpha":-1})", "$.alpha");
  expect_error(R"({"epsilon_list":[0.125],"dimension":1})", "$.dimension");
  expect_error(R"({"epsilon_list":[0.125],"domain":{"xmin":2,"xmax":1}})",
               "$.domain");
  expect_error(R"({"epsilon_list":[0.125],"domain":{"zmax":1}})",
               "$.domain.zmax");
  expect_error(R"({"epsilon_list":[0.125],"f":{"kind":"warp"}})", "$.f.kind");
  expect_error(
      R"({"epsilon_list":[0.125],"f":{"kind":"sphere_trace_constant","params":[1]}})",
      "$.f");
  expect_error(
      R"({"epsilon_list":[0.125],"h":{"kind":"constant","params":[1]}})",
      "$.h");
  expect_error(
      R"({"epsilon_list":[0.125],"f":{"kind":"linear","params":[1]}})", "$.f");
  expect_error(R"({"epsilon_list":[0.125],"mesh":{"h_far":0}})",
               "$.mesh.h_far");
  expect_error(R"({"epsilon_list":[0.125],"mesh":{"min_segments":2}})",
               "$.mesh.min_segments");
  expect_error(R"({"epsilon_list":[0.125],"solver":{"rel_tol":2}})",
               "$.solver.rel_tol");
  expect_error(R"({"epsilon_list":[0.125],"s_mode":"exact"})", "$.s_mode");
  expect_error(R"(not json)", "parse error");
  // radius law violation surfaces through validate
  CHECK_THROWS_AS(parse_config_json(
                      R"({"epsilon_list":[0.125],"radius_coefficient":9.0})"),
                  std::invalid_argument);
}

TEST_CASE("dump and reparse round trip") {
  const ExperimentConfig c = parse_config_json(R"({
    "alpha": 2.0,
    "epsilon_list": [0.25, 0.125],
    "f": {"kind": "linear", "params": [0.5, 1.0, 2.0]},
    "h": {"kind": "sphere_trace_constant", "params": [3.0]},
    "s_mode": "finite"
  })");
  const ExperimentConfig back = parse_config_json(dump_config_json(c));
  CHECK(back.microstructure.alpha == c.microstructure.alpha);
  CHECK(back.epsilon_list == c.epsilon_list);
  CHECK(back.f.kind == c.f.kind);
  CHECK(back.f.params == c.f.params);
  CHECK(back.h.params == c.h.params);
  CHECK(back.s_mode == c.s_mode);
  CHECK(dump_config_json(back) == dump_config_json(c));
}

TEST_CASE("load_config reads files") {
  const std::string path = "config_roundtrip.json";
  {
    std::ofstream out(path);
    out << R"({"epsilon_list":[0.125],"alpha":0.25})";
  }
  const ExperimentConfig c = load_config(path);
  CHECK(c.microstructure.alpha == 0.25);
  CHECK_THROWS_AS(load_config("no_such_file.json"), std::invalid_argument);
}
