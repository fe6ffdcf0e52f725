#include "stl/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace stl {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config: " + path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) fail(path + "." + key, "unknown key");
}

double get_number(const json& obj, const std::string& path,
                  const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail(path + "." + key, "expected a number");
  return obj[key].get<double>();
}

AnalyticFunction parse_function(const json& obj, const std::string& path,
                                const AnalyticFunction& fallback) {
  if (obj.is_null()) return fallback;
  if (!obj.is_object()) fail(path, "expected an object {kind, params}");
  check_keys(obj, path, {"kind", "params"});
  if (!obj.contains("kind") || !obj["kind"].is_string())
    fail(path + ".kind", "expected a string");
  AnalyticFunction f;
  try {
    f.kind = function_kind_from_name(obj["kind"].get<std::string>());
  } catch (const std::exception& e) {
    fail(path + ".kind", e.what());
  }
  f.params.clear();
  if (obj.contains("params")) {
    if (!obj["params"].is_array()) fail(path + ".params", "expected an array");
    for (const auto& p : obj["params"]) {
      if (!p.is_number()) fail(path + ".params", "expected numbers");
      f.params.push_back(p.get<double>());
    }
  }
  try {
    f.validate();
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  return f;
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") +
                                e.what());
  }
  if (!doc.is_object()) fail("$", "expected a JSON object");
  check_keys(doc, "$",
             {"domain", "alpha", "dimension", "radius_coefficient",
              "epsilon_list", "f", "g_outer", "h", "mesh", "solver", "s_mode",
              "output_dir"});

  ExperimentConfig config;

  if (doc.contains("domain")) {
    const json& d = doc["domain"];
    if (!d.is_object()) fail("$.domain", "expected an object");
    check_keys(d, "$.domain", {"xmin", "xmax", "ymin", "ymax"});
    config.microstructure.domain.xmin = get_number(d, "$.domain", "xmin", 0.0);
    config.microstructure.domain.xmax = get_number(d, "$.domain", "xmax", 1.0);
    config.microstructure.domain.ymin = get_number(d, "$.domain", "ymin", 0.0);
    config.microstructure.domain.ymax = get_number(d, "$.domain", "ymax", 1.0);
    try {
      config.microstructure.domain.validate();
    } catch (const std::exception& e) {
      fail("$.domain", e.what());
    }
  }

  config.microstructure.alpha = get_number(doc, "$", "alpha", 1.0);
  if (config.microstructure.alpha < 0.0) fail("$.alpha", "must be >= 0");
  if (doc.contains("dimension")) {
    if (!doc["dimension"].is_number_integer())
      fail("$.dimension", "expected an integer");
    config.microstructure.dimension = doc["dimension"].get<int>();
    if (config.microstructure.dimension < 2) fail("$.dimension", "must be >= 2");
  }
  config.microstructure.radius_coefficient =
      get_number(doc, "$", "radius_coefficient", 1.0);
  if (!(config.microstructure.radius_coefficient > 0.0))
    fail("$.radius_coefficient", "must be > 0");

  if (!doc.contains("epsilon_list")) fail("$.epsilon_list", "required");
  if (!doc["epsilon_list"].is_array() || doc["epsilon_list"].empty())
    fail("$.epsilon_list", "expected a nonempty array");
  for (const auto& e : doc["epsilon_list"]) {
    if (!e.is_number()) fail("$.epsilon_list", "expected numbers");
    config.epsilon_list.push_back(e.get<double>());
  }
  for (std::size_t i = 0; i + 1 < config.epsilon_list.size(); ++i)
    if (!(config.epsilon_list[i] > config.epsilon_list[i + 1]))
      fail("$.epsilon_list", "must be strictly decreasing");
  config.microstructure.epsilon = config.epsilon_list.front();

  config.f = parse_function(doc.value("f", json()), "$.f",
                            AnalyticFunction::constant(1.0));
  config.g_outer = parse_function(doc.value("g_outer", json()), "$.g_outer",
                                  AnalyticFunction::constant(0.0));
  config.h = parse_function(doc.value("h", json()), "$.h",
                            AnalyticFunction::sphere_constant(0.0));
  if (!config.f.is_planar()) fail("$.f", "must be planar");
  if (!config.g_outer.is_planar()) fail("$.g_outer", "must be planar");
  if (!config.h.is_sphere_trace()) fail("$.h", "must be a sphere trace");

  if (doc.contains("mesh")) {
    const json& m = doc["mesh"];
    if (!m.is_object()) fail("$.mesh", "expected an object");
    check_keys(m, "$.mesh", {"h_far", "min_segments"});
    config.mesh.h_far = get_number(m, "$.mesh", "h_far", config.mesh.h_far);
    if (!(config.mesh.h_far > 0.0)) fail("$.mesh.h_far", "must be > 0");
    if (m.contains("min_segments")) {
      if (!m["min_segments"].is_number_integer())
        fail("$.mesh.min_segments", "expected an integer");
      config.mesh.min_segments = m["min_segments"].get<int>();
      if (config.mesh.min_segments < 3)
        fail("$.mesh.min_segments", "must be >= 3");
    }
  }

  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    if (!s.is_object()) fail("$.solver", "expected an object");
    check_keys(s, "$.solver", {"rel_tol", "max_iter"});
    config.solver.rel_tol =
        get_number(s, "$.solver", "rel_tol", config.solver.rel_tol);
    if (!(config.solver.rel_tol > 0.0 && config.solver.rel_tol < 1.0))
      fail("$.solver.rel_tol", "must be in (0,1)");
    if (s.contains("max_iter")) {
      if (!s["max_iter"].is_number_integer())
        fail("$.solver.max_iter", "expected an integer");
      config.solver.max_iter = s["max_iter"].get<int>();
      if (config.solver.max_iter < 0) fail("$.solver.max_iter", "must be >= 0");
    }
  }

  if (doc.contains("s_mode")) {
    if (!doc["s_mode"].is_string()) fail("$.s_mode", "expected a string");
    const std::string mode = doc["s_mode"].get<std::string>();
    if (mode == "limit")
      config.s_mode = SMode::Limit;
    else if (mode == "finite")
      config.s_mode = SMode::Finite;
    else
      fail("$.s_mode", "expected \"limit\" or \"finite\"");
  }

  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) fail("$.output_dir", "expected a string");
    config.output_dir = doc["output_dir"].get<std::string>();
  }

  config.validate();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

std::string dump_config_json(const ExperimentConfig& config) {
  json doc;
  doc["domain"] = {{"xmin", config.microstructure.domain.xmin},
                   {"xmax", config.microstructure.domain.xmax},
                   {"ymin", config.microstructure.domain.ymin},
                   {"ymax", config.microstructure.domain.ymax}};
  doc["alpha"] = config.microstructure.alpha;
  doc["dimension"] = config.microstructure.dimension;
  doc["radius_coefficient"] = config.microstructure.radius_coefficient;
  doc["epsilon_list"] = config.epsilon_list;
  auto fn = [](const AnalyticFunction& f) {
    return json{{"kind", function_kind_name(f.kind)}, {"params", f.params}};
  };
  doc["f"] = fn(config.f);
  doc["g_outer"] = fn(config.g_outer);
  doc["h"] = fn(config.h);
  doc["mesh"] = {{"h_far", config.mesh.h_far},
                 {"min_segments", config.mesh.min_segments}};
  doc["solver"] = {{"rel_tol", config.solver.rel_tol},
                   {"max_iter", config.solver.max_iter}};
  doc["s_mode"] = config.s_mode == SMode::Limit ? "limit" : "finite";
  doc["output_dir"] = config.output_dir;
  return doc.dump(2);
}

void save_study_json(const std::string& path, const StudyReport& report,
                     const ExperimentConfig& config) {
  json doc;
  doc["config"] = json::parse(dump_config_json(config));
  doc["rows"] = json::array();
  for (const StudyRow& row : report.rows) {
    doc["rows"].push_back({{"eps", row.eps},
                           {"n_holes", row.n_holes},
                           {"r", row.r},
                           {"S_eps", row.S_eps},
                           {"q_bnd", row.q_bnd},
                           {"eta", row.eta},
                           {"h_bar", row.h_bar},
                           {"l2_err", row.l2_err},
                           {"gamma_sum", row.gamma_sum},
                           {"gamma_closed", row.gamma_closed},
                           {"cg_iters", row.cg_iters},
                           {"wall_ms", row.wall_ms}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_study_json: cannot open " + path);
  out << doc.dump(2) << '\n';
}

}  // namespace stl
