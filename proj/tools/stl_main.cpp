// Command-line front end: numerical verification of the homogenized limit of
// the inhomogeneous Robin problem in periodically perforated rectangles.

#include "stl/config.hpp"
#include "stl/experiments.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace {

using namespace stl;

std::string eps_label(double eps) {
  std::ostringstream s;
  s << eps;
  std::string out = s.str();
  for (char& c : out)
    if (c == '.') c = 'p';
  return out;
}

ExperimentConfig load_with_overrides(const std::string& config_path,
                                     const std::vector<std::string>& overrides,
                                     const std::string& out_dir_flag) {
  std::ifstream in(config_path);
  if (!in) throw std::invalid_argument("config: cannot open " + config_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  nlohmann::json doc = nlohmann::json::parse(buf.str());

  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("override must be key=value: " + kv);
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(value);
    } catch (const nlohmann::json::parse_error&) {
      parsed = value;  // bare strings
    }
    nlohmann::json* node = &doc;
    std::size_t pos = 0;
    while (true) {
      const auto dot = key.find('.', pos);
      const std::string part = key.substr(pos, dot - pos);
      if (dot == std::string::npos) {
        (*node)[part] = parsed;
        break;
      }
      node = &(*node)[part];
      pos = dot + 1;
    }
  }

  ExperimentConfig config = parse_config_json(doc.dump());
  if (!out_dir_flag.empty()) config.output_dir = out_dir_flag;
  if (const char* env = std::getenv("STL_OUT_DIR"); env && *env)
    config.output_dir = env;
  return config;
}

std::filesystem::path out_path(const ExperimentConfig& config,
                               const std::string& name) {
  std::filesystem::create_directories(config.output_dir);
  return std::filesystem::path(config.output_dir) / name;
}

int run_mesh(const ExperimentConfig& config) {
  for (double eps : config.epsilon_list) {
    MicrostructureSpec spec = config.microstructure;
    spec.epsilon = eps;
    const Mesh mesh = mesh_perforated(spec.domain, build_holes(spec),
                                      config.mesh.h_far, config.mesh.min_segments);
    const auto path = out_path(config, "mesh_eps" + eps_label(eps) + ".txt");
    save_mesh(path.string(), mesh);
    const MeshQualityReport q = quality_report(mesh);
    std::cout << "eps=" << eps << " vertices=" << q.vertex_count
              << " triangles=" << q.triangle_count
              << " min_angle=" << q.min_angle_deg << " -> " << path.string()
              << '\n';
  }
  return 0;
}

int run_solve_eps(const ExperimentConfig& config) {
  for (double eps : config.epsilon_list) {
    const Solution sol = solve_eps_problem(config, eps);
    const auto mesh_path = out_path(config, "mesh_eps" + eps_label(eps) + ".txt");
    const auto field_path = out_path(config, "u_eps" + eps_label(eps) + ".txt");
    save_mesh(mesh_path.string(), *sol.mesh);
    save_field(field_path.string(), sol.field());
    std::cout << "eps=" << eps << " cg_iters=" << sol.cg_iterations << " -> "
              << field_path.string() << '\n';
  }
  return 0;
}

int run_solve_hom(const ExperimentConfig& config) {
  const std::optional<double> eps =
      config.s_mode == SMode::Finite
          ? std::optional<double>(config.epsilon_list.front())
          : std::nullopt;
  const Solution sol = solve_homogenized(config, eps);
  const auto mesh_path = out_path(config, "mesh_hom.txt");
  const auto field_path = out_path(config, "u_hom.txt");
  save_mesh(mesh_path.string(), *sol.mesh);
  save_field(field_path.string(), sol.field());
  std::cout << "eta=" << eta_for_config(config, eps)
            << " cg_iters=" << sol.cg_iterations << " -> "
            << field_path.string() << '\n';
  return 0;
}

int run_converge(const ExperimentConfig& config) {
  const StudyReport report = convergence_study(config);
  save_study_json(out_path(config, "converge.json").string(), report, config);
  report.write_csv(std::cout);
  return 0;
}

int run_gamma(const ExperimentConfig& config) {
  const StudyReport report = gamma_study(config);
  save_study_json(out_path(config, "gamma.json").string(), report, config);
  report.write_csv(std::cout);
  return 0;
}

int run_consistency(const ExperimentConfig& config, double c_g) {
  const KaizuReport report = kaizu_consistency(config, c_g);
  std::cout << "c_g=" << report.c_g << " max_diff=" << report.max_diff << '\n';
  return report.max_diff < 1e-8 ? 0 : 2;
}

int run_selftest() {
  int failures = 0;
  auto check = [&failures](bool ok, const std::string& name) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << '\n';
    if (!ok) ++failures;
  };

  // q boundary trace against hand evaluation
  check(std::fabs(q_boundary({0.1, 0.01, 1.0, 2}) - 0.97749240558387676) < 1e-6,
        "q_boundary N=2");
  check(std::fabs(q_boundary({0.1, 0.0316228, 1.0, 3}) - 0.978834863988147) < 1e-6,
        "q_boundary N=3");

  // Robin residual of the corrector on random parameters
  {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double eps = 0.01 + 0.2 * U(rng);
      const double r = eps * (0.05 + 0.9 * U(rng));
      const double alpha = 5.0 * U(rng);
      const int n = 2 + static_cast<int>(3.0 * U(rng));
      worst = std::max(worst,
                       std::fabs(robin_residual_at_hole({eps, r, alpha, n})));
    }
    check(worst < 1e-13, "robin residual");
  }

  // element stiffness of the unit right triangle
  {
    Mesh m;
    m.vertices = {{0, 0}, {1, 0}, {0, 1}};
    m.triangles = {{0, 1, 2}};
    const SparseSymMatrix K = assemble_stiffness(m);
    check(std::fabs(K.entry(0, 0) - 1.0) < 1e-14 &&
              std::fabs(K.entry(0, 1) + 0.5) < 1e-14 &&
              std::fabs(K.entry(1, 1) - 0.5) < 1e-14 &&
              std::fabs(K.entry(1, 2)) < 1e-14,
          "stiffness element matrix");
    const SparseSymMatrix M = assemble_mass(m);
    check(std::fabs(M.entry(0, 0) - 2.0 / 24.0) < 1e-15 &&
              std::fabs(M.entry(0, 1) - 1.0 / 24.0) < 1e-15,
          "mass element matrix");
  }

  // constant reproduction on a small perforated problem
  {
    ExperimentConfig config;
    config.epsilon_list = {0.25};
    config.f = AnalyticFunction::constant(0.0);
    config.g_outer = AnalyticFunction::constant(2.0);
    config.h = AnalyticFunction::sphere_constant(2.0);
    const Solution sol = solve_eps_problem(config, 0.25);
    double worst = 0.0;
    for (double v : sol.values) worst = std::max(worst, std::fabs(v - 2.0));
    check(worst < 1e-8, "constant Robin solution");
  }

  std::cout << (failures == 0 ? "selftest OK" : "selftest FAILED") << '\n';
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homogenization of the inhomogeneous Robin problem in "
               "perforated rectangles"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  double c_g = 1.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file")->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--set", overrides, "config override key=value");
  };

  CLI::App* cmd_mesh = app.add_subcommand("mesh", "generate perforated meshes");
  CLI::App* cmd_eps = app.add_subcommand("solve-eps", "solve the eps-problems");
  CLI::App* cmd_hom =
      app.add_subcommand("solve-hom", "solve the homogenized problem");
  CLI::App* cmd_gamma = app.add_subcommand("gamma-study", "gamma sum study");
  CLI::App* cmd_conv = app.add_subcommand("converge", "convergence study");
  CLI::App* cmd_cons =
      app.add_subcommand("consistency", "constant-data consistency check");
  app.add_subcommand("selftest", "run the built-in oracle suite");
  for (CLI::App* cmd : {cmd_mesh, cmd_eps, cmd_hom, cmd_gamma, cmd_conv, cmd_cons})
    add_common(cmd);
  cmd_cons->add_option("--cg", c_g, "constant boundary datum c_g");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand("selftest")) return run_selftest();
    const ExperimentConfig config =
        load_with_overrides(config_path, overrides, out_dir);
    if (app.got_subcommand("mesh")) return run_mesh(config);
    if (app.got_subcommand("solve-eps")) return run_solve_eps(config);
    if (app.got_subcommand("solve-hom")) return run_solve_hom(config);
    if (app.got_subcommand("gamma-study")) return run_gamma(config);
    if (app.got_subcommand("converge")) return run_converge(config);
    if (app.got_subcommand("consistency")) return run_consistency(config, c_g);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
