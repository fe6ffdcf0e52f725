#include "stl/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace stl {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

MicrostructureSpec spec_at(const ExperimentConfig& config, double epsilon) {
  MicrostructureSpec spec = config.microstructure;
  spec.epsilon = epsilon;
  return spec;
}

constexpr int kSphereQuadPoints = 64;

}  // namespace

void ExperimentConfig::validate() const {
  microstructure.validate();
  if (epsilon_list.empty())
    throw std::invalid_argument("epsilon_list: must be nonempty");
  for (std::size_t i = 0; i + 1 < epsilon_list.size(); ++i)
    if (!(epsilon_list[i] > epsilon_list[i + 1]))
      throw std::invalid_argument("epsilon_list: must be strictly decreasing");
  for (double e : epsilon_list)
    if (!(e > 0.0)) throw std::invalid_argument("epsilon_list: entries must be > 0");
  f.validate();
  g_outer.validate();
  h.validate();
  if (!f.is_planar()) throw std::invalid_argument("f: must be planar");
  if (!g_outer.is_planar())
    throw std::invalid_argument("g_outer: must be planar");
  if (!h.is_sphere_trace())
    throw std::invalid_argument("h: must be a sphere-trace function");
  if (!(mesh.h_far > 0.0)) throw std::invalid_argument("mesh.h_far: must be > 0");
  if (mesh.min_segments < 3)
    throw std::invalid_argument("mesh.min_segments: must be >= 3");
  if (!(solver.rel_tol > 0.0 && solver.rel_tol < 1.0))
    throw std::invalid_argument("solver.rel_tol: must be in (0,1)");
  if (solver.max_iter < 0)
    throw std::invalid_argument("solver.max_iter: must be >= 0");
}

int resolve_max_iter(const SolverControls& solver, std::size_t n) {
  if (solver.max_iter > 0) return solver.max_iter;
  return std::max(200, static_cast<int>(20.0 * std::sqrt(static_cast<double>(n))));
}

double eta_for_config(const ExperimentConfig& config,
                      std::optional<double> epsilon) {
  const MicrostructureSpec& ms = config.microstructure;
  double S;
  if (config.s_mode == SMode::Limit) {
    S = limit_S(spec_at(config, epsilon.value_or(config.epsilon_list.front())));
  } else {
    if (!epsilon)
      throw std::invalid_argument("finite S mode needs an epsilon");
    const MicrostructureSpec spec = spec_at(config, *epsilon);
    S = finite_S(build_lattice(spec), hole_radius(spec), spec.dimension);
  }
  return eta_coefficient(ms.alpha, S, ms.dimension, ms.domain.area());
}

Solution solve_eps_problem(const ExperimentConfig& config, double epsilon) {
  config.validate();
  const MicrostructureSpec spec = spec_at(config, epsilon);
  if (spec.dimension != 2)
    throw std::invalid_argument("solve_eps_problem: N = 2 only");

  auto mesh = std::make_shared<Mesh>(
      mesh_perforated(spec.domain, build_holes(spec), config.mesh.h_far,
                      config.mesh.min_segments));

  const double alpha = spec.alpha;
  const SparseSymMatrix K = assemble_stiffness(*mesh);
  const SparseSymMatrix R = assemble_robin_boundary(*mesh, BoundaryFilter::All, alpha);
  LinearSystem system;
  system.matrix = matrix_sum(K, 1.0, &R, 1.0);
  system.rhs = assemble_load(*mesh, config.f);
  const auto outer = assemble_robin_load(*mesh, BoundaryFilter::Outer, alpha,
                                         config.g_outer);
  const auto rims =
      assemble_robin_load(*mesh, BoundaryFilter::Holes, alpha, config.h);
  for (std::size_t i = 0; i < system.rhs.size(); ++i)
    system.rhs[i] += outer[i] + rims[i];

  CgResult cg = solve_cg(system, config.solver.rel_tol,
                         resolve_max_iter(config.solver, system.rhs.size()));
  return {std::move(mesh), std::move(cg.x), cg.iterations};
}

Solution solve_homogenized(const ExperimentConfig& config,
                           std::optional<double> epsilon,
                           std::optional<double> eta_override) {
  config.validate();
  const MicrostructureSpec& ms = config.microstructure;
  const double eta =
      eta_override ? *eta_override : eta_for_config(config, epsilon);
  const double h_bar = h_mean(config.h, ms.dimension, kSphereQuadPoints);

  auto mesh = std::make_shared<Mesh>(
      mesh_rectangle(ms.domain, config.mesh.h_far / 2.0));

  const SparseSymMatrix K = assemble_stiffness(*mesh);
  const SparseSymMatrix M = assemble_mass(*mesh);
  const SparseSymMatrix R =
      assemble_robin_boundary(*mesh, BoundaryFilter::Outer, ms.alpha);
  LinearSystem system;
  system.matrix = matrix_sum(K, 1.0, &M, eta, &R, 1.0);
  system.rhs = assemble_load(*mesh, config.f);
  const auto shift =
      assemble_load(*mesh, AnalyticFunction::constant(eta * h_bar));
  const auto outer = assemble_robin_load(*mesh, BoundaryFilter::Outer, ms.alpha,
                                         config.g_outer);
  for (std::size_t i = 0; i < system.rhs.size(); ++i)
    system.rhs[i] += shift[i] + outer[i];

  CgResult cg = solve_cg(system, config.solver.rel_tol,
                         resolve_max_iter(config.solver, system.rhs.size()));
  return {std::move(mesh), std::move(cg.x), cg.iterations};
}

void StudyReport::write_csv(std::ostream& out) const {
  out << "eps,n_holes,r,S_eps,q_bnd,eta,h_bar,l2_err,gamma_sum,gamma_closed,"
         "cg_iters,wall_ms\n";
  char buf[512];
  for (const StudyRow& row : rows) {
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                  "%d,%.3f\n",
                  row.eps, row.n_holes, row.r, row.S_eps, row.q_bnd, row.eta,
                  row.h_bar, row.l2_err, row.gamma_sum, row.gamma_closed,
                  row.cg_iters, row.wall_ms);
    out << buf;
  }
}

void StudyReport::save(const std::string& csv_path) const {
  std::ofstream out(csv_path);
  if (!out) throw std::runtime_error("StudyReport: cannot open " + csv_path);
  write_csv(out);
}

namespace {

StudyRow coefficient_row(const ExperimentConfig& config, double epsilon) {
  const MicrostructureSpec spec = spec_at(config, epsilon);
  StudyRow row;
  row.eps = epsilon;
  row.r = hole_radius(spec);
  const Lattice lattice = build_lattice(spec);
  row.n_holes = lattice.size();
  row.S_eps = finite_S(lattice, row.r, spec.dimension);
  row.q_bnd =
      q_boundary({spec.epsilon, row.r, spec.alpha, spec.dimension});
  row.eta = eta_for_config(config, epsilon);
  row.h_bar = h_mean(config.h, spec.dimension, kSphereQuadPoints);
  return row;
}

std::string report_path(const ExperimentConfig& config, const char* name) {
  std::filesystem::create_directories(config.output_dir);
  return (std::filesystem::path(config.output_dir) / name).string();
}

}  // namespace

StudyReport convergence_study(const ExperimentConfig& config) {
  config.validate();
  StudyReport report;
  const std::string csv = report_path(config, "converge.csv");

  const Solution hom = solve_homogenized(
      config, config.s_mode == SMode::Finite
                  ? std::optional<double>(config.epsilon_list.front())
                  : std::nullopt);
  const ScalarField hom_field = hom.field();

  for (double eps : config.epsilon_list) {
    const auto start = Clock::now();
    try {
      StudyRow row = coefficient_row(config, eps);
      // With finite S mode the reference coefficient tracks each row's eps.
      const Solution hom_row =
          config.s_mode == SMode::Finite
              ? solve_homogenized(config, eps)
              : Solution{};
      const ScalarField& ref =
          config.s_mode == SMode::Finite ? hom_row.field() : hom_field;
      const Solution sol = solve_eps_problem(config, eps);
      row.l2_err = l2_error(sol.field(), ref);
      row.cg_iters = sol.cg_iterations;
      row.wall_ms = ms_since(start);
      report.rows.push_back(row);
    } catch (const std::exception& e) {
      report.save(csv);
      throw std::runtime_error("convergence_study failed at eps=" +
                               std::to_string(eps) + ": " + e.what());
    }
  }
  report.save(csv);
  return report;
}

StudyReport gamma_study(const ExperimentConfig& config) {
  config.validate();
  if (config.microstructure.dimension != 2)
    throw std::invalid_argument("gamma_study: N = 2 only");
  StudyReport report;

  // Int(zeta) by the same triangle quadrature on a fine plain mesh; the sum
  // of the load vector is exactly the quadrature of zeta.
  const Mesh fine = mesh_rectangle(config.microstructure.domain,
                                   config.mesh.h_far / 2.0);
  double zeta_integral = 0.0;
  for (double v : assemble_load(fine, config.f)) zeta_integral += v;

  const MicrostructureSpec& ms = config.microstructure;
  const double h_bar = h_mean(config.h, ms.dimension, kSphereQuadPoints);
  const HomogenizedCoefficients limit_coeffs = make_homogenized_coefficients(
      ms.alpha, limit_S(spec_at(config, config.epsilon_list.front())),
      ms.dimension, ms.domain.area(), h_bar);

  for (double eps : config.epsilon_list) {
    const auto start = Clock::now();
    StudyRow row = coefficient_row(config, eps);
    const MicrostructureSpec spec = spec_at(config, eps);
    const Lattice lattice = build_lattice(spec);
    row.gamma_sum =
        gamma_discrete_sum(spec, lattice, config.f, config.h, kSphereQuadPoints);
    row.gamma_closed = gamma_closed_form(limit_coeffs, zeta_integral);
    row.wall_ms = ms_since(start);
    report.rows.push_back(row);
  }
  report.save(report_path(config, "gamma.csv"));
  return report;
}

KaizuReport kaizu_consistency(const ExperimentConfig& config, double c_g) {
  config.validate();
  const std::optional<double> eps =
      config.s_mode == SMode::Finite
          ? std::optional<double>(config.epsilon_list.front())
          : std::nullopt;

  ExperimentConfig inhom = config;
  inhom.g_outer = AnalyticFunction::constant(c_g);
  inhom.h = AnalyticFunction::sphere_constant(c_g);
  ExperimentConfig hom = config;
  hom.g_outer = AnalyticFunction::constant(0.0);
  hom.h = AnalyticFunction::sphere_constant(0.0);

  const Solution u = solve_homogenized(inhom, eps);
  const Solution v = solve_homogenized(hom, eps);
  if (u.values.size() != v.values.size())
    throw std::logic_error("kaizu_consistency: mesh mismatch");

  KaizuReport report;
  report.c_g = c_g;
  report.iters_inhomogeneous = u.cg_iterations;
  report.iters_homogeneous = v.cg_iterations;
  for (std::size_t i = 0; i < u.values.size(); ++i)
    report.max_diff =
        std::max(report.max_diff, std::fabs(u.values[i] - (v.values[i] + c_g)));
  return report;
}

}  // namespace stl
