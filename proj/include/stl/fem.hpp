#pragma once

#include "stl/analytic.hpp"
#include "stl/mesh.hpp"

#include <utility>
#include <vector>

namespace stl {

/// Symmetric sparse matrix in CSR form. Column indices are sorted per row,
/// the pattern is structurally symmetric and every diagonal entry is stored.
struct SparseSymMatrix {
  int n = 0;
  std::vector<int> row_offsets;  // size n + 1
  std::vector<int> cols;
  std::vector<double> vals;

  struct Triplet {
    int row;
    int col;
    double value;
  };

  static SparseSymMatrix from_triplets(int n, std::vector<Triplet> triplets);

  void matvec(const std::vector<double>& x, std::vector<double>& y) const;
  double entry(int i, int j) const;  // 0 when not stored
  std::vector<double> diagonal() const;
};

/// A + alpha * B + beta * C (null pointers allowed for B, C).
SparseSymMatrix matrix_sum(const SparseSymMatrix& a, double sa,
                           const SparseSymMatrix* b = nullptr, double sb = 0.0,
                           const SparseSymMatrix* c = nullptr, double sc = 0.0);

struct LinearSystem {
  SparseSymMatrix matrix;
  std::vector<double> rhs;
};

struct ScalarField {
  const Mesh* mesh = nullptr;
  std::vector<double> values;
};

enum class BoundaryFilter { Outer, Holes, All };

/// P1 stiffness matrix; constants lie in the kernel (zero row sums).
SparseSymMatrix assemble_stiffness(const Mesh& mesh);

/// Consistent P1 mass matrix, element block (area/12) [[2,1,1],[1,2,1],[1,1,2]].
SparseSymMatrix assemble_mass(const Mesh& mesh);

/// Robin boundary matrix: sum over matching edges of (alpha L/6) [[2,1],[1,2]].
SparseSymMatrix assemble_robin_boundary(const Mesh& mesh, BoundaryFilter filter,
                                        double alpha);

/// Load vector for planar f with the 3-point edge-midpoint rule (exact
/// through quadratics).
std::vector<double> assemble_load(const Mesh& mesh, const AnalyticFunction& f);

/// Boundary load alpha * Int(g phi_i) over matching edges, 2-point Gauss.
/// Outer edges need planar data; hole edges need sphere-trace data evaluated
/// in the local angle of the owning hole.
std::vector<double> assemble_robin_load(const Mesh& mesh, BoundaryFilter filter,
                                        double alpha,
                                        const AnalyticFunction& data);

struct CgResult {
  std::vector<double> x;
  int iterations = 0;
};

/// Jacobi-preconditioned conjugate gradients; throws on non-convergence or
/// an indefinite direction.
CgResult solve_cg(const LinearSystem& system, double rel_tol, int max_iter);

/// L2 norm of (field - reference) over the field's mesh, 3-point rule.
double l2_error(const ScalarField& field, const AnalyticFunction& reference);
double l2_error(const ScalarField& field, const ScalarField& reference);

/// P1 value at a point of the field's own mesh.
double eval_field(const ScalarField& field, double px, double py);

/// Hole centers for angle-parameterized rim data; falls back to rim-vertex
/// averaging when the mesh carries no hole metadata.
std::vector<Point2> mesh_hole_centers(const Mesh& mesh);

void write_field(std::ostream& out, const ScalarField& field);
std::vector<double> read_field_values(std::istream& in);
void save_field(const std::string& path, const ScalarField& field);

}  // namespace stl
