#pragma once

#include "stl/closed_form.hpp"
#include "stl/fem.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace stl {

enum class SMode { Limit, Finite };

struct MeshControls {
  double h_far = 0.05;
  int min_segments = 16;
};

struct SolverControls {
  double rel_tol = 1e-10;
  int max_iter = 0;  // 0: use 20 * sqrt(n)
};

struct ExperimentConfig {
  MicrostructureSpec microstructure;  // epsilon overridden per run
  std::vector<double> epsilon_list;
  AnalyticFunction f = AnalyticFunction::constant(1.0);
  AnalyticFunction g_outer = AnalyticFunction::constant(0.0);
  AnalyticFunction h = AnalyticFunction::sphere_constant(0.0);
  MeshControls mesh;
  SolverControls solver;
  SMode s_mode = SMode::Limit;
  std::string output_dir = ".";

  void validate() const;
};

struct Solution {
  std::shared_ptr<Mesh> mesh;
  std::vector<double> values;
  int cg_iterations = 0;

  ScalarField field() const { return {mesh.get(), values}; }
};

struct StudyRow {
  double eps = 0.0;
  std::size_t n_holes = 0;
  double r = 0.0;
  double S_eps = 0.0;
  double q_bnd = 0.0;
  double eta = 0.0;
  double h_bar = 0.0;
  double l2_err = 0.0;
  double gamma_sum = 0.0;
  double gamma_closed = 0.0;
  int cg_iters = 0;
  double wall_ms = 0.0;
};

struct StudyReport {
  std::vector<StudyRow> rows;

  void write_csv(std::ostream& out) const;
  void save(const std::string& csv_path) const;
};

/// Direct finite element solve of the eps-problem on the perforated mesh:
/// -Laplace u = f with Robin data g_outer on the rectangle and h on every
/// hole rim, one alpha for both boundary families.
Solution solve_eps_problem(const ExperimentConfig& config, double epsilon);

/// Homogenized Helmholtz solve (eta - Laplace) u = f + eta h_bar on a plain
/// rectangle mesh at h = h_far / 2. With finite S mode, epsilon selects the
/// lattice used for the coefficient.
Solution solve_homogenized(const ExperimentConfig& config,
                           std::optional<double> epsilon = std::nullopt,
                           std::optional<double> eta_override = std::nullopt);

/// Per-eps solves against the homogenized reference, errors over the
/// perforated domain only; CSV written to output_dir/converge.csv (partial
/// on failure).
StudyReport convergence_study(const ExperimentConfig& config);

/// Finite-eps boundary sums against the closed-form gamma; zeta is the
/// config's planar f, the per-hole data is the config's h. No FEM solve.
StudyReport gamma_study(const ExperimentConfig& config);

struct KaizuReport {
  double c_g = 0.0;
  double max_diff = 0.0;
  int iters_inhomogeneous = 0;
  int iters_homogeneous = 0;
};

/// Solves the homogenized problem with g = h_bar = c_g and the homogeneous
/// one with g = h_bar = 0 on the same mesh; the solutions must differ by the
/// constant c_g.
KaizuReport kaizu_consistency(const ExperimentConfig& config, double c_g);

/// eta for the config's S mode (finite mode requires an epsilon).
double eta_for_config(const ExperimentConfig& config,
                      std::optional<double> epsilon);

int resolve_max_iter(const SolverControls& solver, std::size_t n);

}  // namespace stl
