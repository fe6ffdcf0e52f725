#include "stl/fem.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

using namespace stl;

namespace {

constexpr double kPi = 3.14159265358979323846;

Mesh unit_triangle() {
  Mesh m;
  m.vertices = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  m.triangles = {{0, 1, 2}};
  m.h = 1.0;
  return m;
}

}  // namespace

TEST_CASE("sparse matrix from triplets") {
  SparseSymMatrix a = SparseSymMatrix::from_triplets(
      3, {{0, 1, 2.0}, {1, 0, 2.0}, {0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0},
          {2, 2, 4.0}});
  CHECK(a.entry(0, 0) == 1.0);
  CHECK(a.entry(0, 1) == 3.0);
  CHECK(a.entry(1, 0) == 3.0);
  CHECK(a.entry(1, 1) == 0.0);
  CHECK(a.entry(2, 2) == 4.0);
  CHECK(a.entry(0, 2) == 0.0);
  std::vector<double> y(3);
  a.matvec({1.0, 2.0, 3.0}, y);
  CHECK(y[0] == doctest::Approx(7.0));
  CHECK(y[1] == doctest::Approx(3.0));
  CHECK(y[2] == doctest::Approx(12.0));
}

TEST_CASE("matrix_sum combines patterns") {
  SparseSymMatrix a = SparseSymMatrix::from_triplets(2, {{0, 0, 1.0}});
  SparseSymMatrix b =
      SparseSymMatrix::from_triplets(2, {{0, 1, 2.0}, {1, 0, 2.0}, {1, 1, 3.0}});
  SparseSymMatrix c = matrix_sum(a, 2.0, &b, 0.5);
  CHECK(c.entry(0, 0) == doctest::Approx(2.0));
  CHECK(c.entry(0, 1) == doctest::Approx(1.0));
  CHECK(c.entry(1, 1) == doctest::Approx(1.5));
}

TEST_CASE("element stiffness of the unit right triangle") {
  const SparseSymMatrix k = assemble_stiffness(unit_triangle());
  CHECK(k.entry(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(k.entry(0, 1) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(k.entry(0, 2) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(k.entry(1, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(k.entry(1, 2) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(k.entry(2, 2) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("stiffness row sums vanish") {
  DomainSpec dom;
  const Mesh mesh = mesh_perforated(dom, {{0.5, 0.5, 0.0625}}, 0.15, 12);
  const SparseSymMatrix k = assemble_stiffness(mesh);
  std::vector<double> ones(mesh.vertex_count(), 1.0), y(mesh.vertex_count());
  k.matvec(ones, y);
  for (double v : y) CHECK(std::fabs(v) < 1e-12);
}

TEST_CASE("mass matrix integrates to the area") {
  DomainSpec dom;
  const Mesh mesh = mesh_rectangle(dom, 0.2);
  const SparseSymMatrix m = assemble_mass(mesh);
  std::vector<double> ones(mesh.vertex_count(), 1.0), y(mesh.vertex_count());
  m.matvec(ones, y);
  CHECK(std::accumulate(y.begin(), y.end(), 0.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // element block on a lone triangle
  const SparseSymMatrix e = assemble_mass(unit_triangle());
  CHECK(e.entry(0, 0) == doctest::Approx(2.0 / 24.0).epsilon(1e-14));
  CHECK(e.entry(0, 1) == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
}

TEST_CASE("robin boundary matrix totals alpha times the perimeter") {
  DomainSpec dom;
  const Mesh mesh = mesh_rectangle(dom, 0.25);
  const double alpha = 2.5;
  const SparseSymMatrix r = assemble_robin_boundary(mesh, BoundaryFilter::Outer, alpha);
  std::vector<double> ones(mesh.vertex_count(), 1.0), y(mesh.vertex_count());
  r.matvec(ones, y);
  CHECK(std::accumulate(y.begin(), y.end(), 0.0) ==
        doctest::Approx(alpha * 4.0).epsilon(1e-12));
  CHECK(assemble_robin_boundary(mesh, BoundaryFilter::Holes, alpha).entry(0, 0) ==
        0.0);
}

TEST_CASE("load vector exact for linear integrands") {
  const Mesh m = unit_triangle();
  // f = 1: each node gets area/3
  const auto l1 = assemble_load(m, AnalyticFunction::constant(1.0));
  for (double v : l1) CHECK(v == doctest::Approx(0.5 / 3.0).epsilon(1e-14));
  // f = x: Int x phi_i over the unit right triangle = {1/24, 1/12, 1/24}
  const auto lx = assemble_load(m, AnalyticFunction::linear(0.0, 1.0, 0.0));
  CHECK(lx[0] == doctest::Approx(1.0 / 24.0).epsilon(1e-13));
  CHECK(lx[1] == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
  CHECK(lx[2] == doctest::Approx(1.0 / 24.0).epsilon(1e-13));
}

TEST_CASE("robin load totals alpha Int g over the boundary") {
  DomainSpec dom;
  const Mesh mesh = mesh_rectangle(dom, 0.25);
  const double alpha = 1.5;
  const auto load =
      assemble_robin_load(mesh, BoundaryFilter::Outer, alpha,
                          AnalyticFunction::constant(2.0));
  CHECK(std::accumulate(load.begin(), load.end(), 0.0) ==
        doctest::Approx(alpha * 2.0 * 4.0).epsilon(1e-12));
  const auto zero = assemble_robin_load(mesh, BoundaryFilter::Outer, 0.0,
                                        AnalyticFunction::constant(2.0));
  for (double v : zero) CHECK(v == 0.0);
}

TEST_CASE("solve_cg small system oracle") {
  SparseSymMatrix a = SparseSymMatrix::from_triplets(
      2, {{0, 0, 4.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 3.0}});
  const CgResult res = solve_cg({a, {1.0, 2.0}}, 1e-14, 50);
  CHECK(res.x[0] == doctest::Approx(1.0 / 11.0).epsilon(1e-12));
  CHECK(res.x[1] == doctest::Approx(7.0 / 11.0).epsilon(1e-12));
  // zero right-hand side short-circuits
  const CgResult z = solve_cg({a, {0.0, 0.0}}, 1e-14, 50);
  CHECK(z.x[0] == 0.0);
  CHECK(z.iterations == 0);
  // indefinite matrix is rejected
  SparseSymMatrix ind = SparseSymMatrix::from_triplets(
      2, {{0, 0, 1.0}, {1, 1, -1.0}});
  CHECK_THROWS_AS(solve_cg({ind, {0.0, 1.0}}, 1e-14, 50), std::runtime_error);
  CHECK_THROWS_AS(solve_cg({a, {1.0, 2.0}}, 1e-16, 1), std::runtime_error);
}

TEST_CASE("l2_error oracles") {
  DomainSpec dom;
  const Mesh mesh = mesh_rectangle(dom, 0.125);
  ScalarField zero{&mesh, std::vector<double>(mesh.vertex_count(), 0.0)};
  CHECK(l2_error(zero, AnalyticFunction::linear(0.0, 1.0, 0.0)) ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  // field equal to the reference: zero error
  ScalarField lin{&mesh, {}};
  for (const auto& p : mesh.vertices) lin.values.push_back(2.0 + p.x - p.y);
  CHECK(l2_error(lin, AnalyticFunction::linear(2.0, 1.0, -1.0)) ==
        doctest::Approx(0.0).epsilon(1e-12));
  // cross-mesh against itself interpolated on a finer grid
  const Mesh fine = mesh_rectangle(dom, 0.0625);
  ScalarField lin_fine{&fine, {}};
  for (const auto& p : fine.vertices) lin_fine.values.push_back(2.0 + p.x - p.y);
  CHECK(l2_error(lin_fine, lin) < 1e-12);
}

TEST_CASE("eval_field interpolates linears exactly") {
  DomainSpec dom;
  const Mesh mesh = mesh_rectangle(dom, 0.2);
  ScalarField f{&mesh, {}};
  for (const auto& p : mesh.vertices) f.values.push_back(1.0 + 3.0 * p.x - p.y);
  CHECK(eval_field(f, 0.37, 0.61) ==
        doctest::Approx(1.0 + 3.0 * 0.37 - 0.61).epsilon(1e-12));
}

TEST_CASE("manufactured solution order on the plain square") {
  // -Laplace u* = 2 pi^2 u*, normal derivative vanishes on the square, so the
  // Robin datum is the trace of u* itself.
  DomainSpec dom;
  const AnalyticFunction ustar = AnalyticFunction::cosine_product(1.0, kPi, kPi);
  const AnalyticFunction f =
      AnalyticFunction::cosine_product(2.0 * kPi * kPi, kPi, kPi);
  std::vector<double> errs;
  for (double h : {0.2, 0.1, 0.05, 0.025}) {
    const Mesh mesh = mesh_rectangle(dom, h);
    const SparseSymMatrix k = assemble_stiffness(mesh);
    const SparseSymMatrix r =
        assemble_robin_boundary(mesh, BoundaryFilter::Outer, 1.0);
    const SparseSymMatrix a = matrix_sum(k, 1.0, &r, 1.0);
    std::vector<double> rhs = assemble_load(mesh, f);
    const auto gload =
        assemble_robin_load(mesh, BoundaryFilter::Outer, 1.0, ustar);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += gload[i];
    const CgResult res = solve_cg({a, rhs}, 1e-12, 5000);
    errs.push_back(l2_error({&mesh, res.x}, ustar));
  }
  for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
    const double rate = std::log2(errs[i] / errs[i + 1]);
    CHECK(rate > 1.8);
    CHECK(rate < 2.2);
  }
}

TEST_CASE("field io round trip") {
  DomainSpec dom;
  const Mesh mesh = mesh_rectangle(dom, 0.5);
  ScalarField f{&mesh, {}};
  for (const auto& p : mesh.vertices) f.values.push_back(p.x * p.y + 0.125);
  std::stringstream s;
  write_field(s, f);
  const auto back = read_field_values(s);
  REQUIRE(back.size() == f.values.size());
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(back[i] == f.values[i]);
}
