#include "stl/fem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>

namespace stl {

SparseSymMatrix SparseSymMatrix::from_triplets(int n,
                                               std::vector<Triplet> triplets) {
  for (int i = 0; i < n; ++i) triplets.push_back({i, i, 0.0});
  std::stable_sort(triplets.begin(), triplets.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return std::tie(a.row, a.col) < std::tie(b.row, b.col);
                   });
  SparseSymMatrix m;
  m.n = n;
  m.row_offsets.assign(n + 1, 0);
  for (std::size_t k = 0; k < triplets.size();) {
    const int r = triplets[k].row;
    const int c = triplets[k].col;
    if (r < 0 || r >= n || c < 0 || c >= n)
      throw std::invalid_argument("from_triplets: index out of range");
    double sum = 0.0;
    while (k < triplets.size() && triplets[k].row == r && triplets[k].col == c)
      sum += triplets[k++].value;
    m.cols.push_back(c);
    m.vals.push_back(sum);
    ++m.row_offsets[r + 1];
  }
  for (int i = 0; i < n; ++i) m.row_offsets[i + 1] += m.row_offsets[i];
  return m;
}

void SparseSymMatrix::matvec(const std::vector<double>& x,
                             std::vector<double>& y) const {
  y.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
      s += vals[k] * x[cols[k]];
    y[i] = s;
  }
}

double SparseSymMatrix::entry(int i, int j) const {
  for (int k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
    if (cols[k] == j) return vals[k];
  return 0.0;
}

std::vector<double> SparseSymMatrix::diagonal() const {
  std::vector<double> d(n, 0.0);
  for (int i = 0; i < n; ++i) d[i] = entry(i, i);
  return d;
}

SparseSymMatrix matrix_sum(const SparseSymMatrix& a, double sa,
                           const SparseSymMatrix* b, double sb,
                           const SparseSymMatrix* c, double sc) {
  std::vector<SparseSymMatrix::Triplet> t;
  auto append = [&t](const SparseSymMatrix& m, double s) {
    for (int i = 0; i < m.n; ++i)
      for (int k = m.row_offsets[i]; k < m.row_offsets[i + 1]; ++k)
        t.push_back({i, m.cols[k], s * m.vals[k]});
  };
  append(a, sa);
  if (b) {
    if (b->n != a.n) throw std::invalid_argument("matrix_sum: size mismatch");
    append(*b, sb);
  }
  if (c) {
    if (c->n != a.n) throw std::invalid_argument("matrix_sum: size mismatch");
    append(*c, sc);
  }
  return SparseSymMatrix::from_triplets(a.n, std::move(t));
}

SparseSymMatrix assemble_stiffness(const Mesh& mesh) {
  std::vector<SparseSymMatrix::Triplet> t;
  t.reserve(mesh.triangles.size() * 9);
  for (const auto& tri : mesh.triangles) {
    const Point2& p0 = mesh.vertices[tri[0]];
    const Point2& p1 = mesh.vertices[tri[1]];
    const Point2& p2 = mesh.vertices[tri[2]];
    const double bcoef[3] = {p1.y - p2.y, p2.y - p0.y, p0.y - p1.y};
    const double ccoef[3] = {p2.x - p1.x, p0.x - p2.x, p1.x - p0.x};
    const double area2 =
        (p1.x - p0.x) * (p2.y - p0.y) - (p1.y - p0.y) * (p2.x - p0.x);
    if (!(area2 > 0.0))
      throw std::invalid_argument("assemble_stiffness: non-positive triangle");
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        t.push_back({tri[i], tri[j],
                     (bcoef[i] * bcoef[j] + ccoef[i] * ccoef[j]) / (2.0 * area2)});
  }
  return SparseSymMatrix::from_triplets(static_cast<int>(mesh.vertex_count()),
                                        std::move(t));
}

SparseSymMatrix assemble_mass(const Mesh& mesh) {
  std::vector<SparseSymMatrix::Triplet> t;
  t.reserve(mesh.triangles.size() * 9);
  for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
    const auto& tri = mesh.triangles[k];
    const double area = mesh.triangle_area(k);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        t.push_back({tri[i], tri[j], area / 12.0 * (i == j ? 2.0 : 1.0)});
  }
  return SparseSymMatrix::from_triplets(static_cast<int>(mesh.vertex_count()),
                                        std::move(t));
}

namespace {

bool edge_matches(const BoundaryEdge& e, BoundaryFilter filter) {
  switch (filter) {
    case BoundaryFilter::Outer:
      return e.tag.kind == BoundaryTag::Kind::Outer;
    case BoundaryFilter::Holes:
      return e.tag.kind == BoundaryTag::Kind::Hole;
    case BoundaryFilter::All:
      return true;
  }
  return false;
}

}  // namespace

SparseSymMatrix assemble_robin_boundary(const Mesh& mesh, BoundaryFilter filter,
                                        double alpha) {
  if (alpha < 0.0)
    throw std::invalid_argument("assemble_robin_boundary: alpha must be >= 0");
  std::vector<SparseSymMatrix::Triplet> t;
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    if (!edge_matches(e, filter)) continue;
    const Point2& a = mesh.vertices[e.a];
    const Point2& b = mesh.vertices[e.b];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const double w = alpha * len / 6.0;
    t.push_back({e.a, e.a, 2.0 * w});
    t.push_back({e.b, e.b, 2.0 * w});
    t.push_back({e.a, e.b, w});
    t.push_back({e.b, e.a, w});
  }
  return SparseSymMatrix::from_triplets(static_cast<int>(mesh.vertex_count()),
                                        std::move(t));
}

std::vector<double> assemble_load(const Mesh& mesh, const AnalyticFunction& f) {
  f.validate();
  if (!f.is_planar())
    throw std::invalid_argument("assemble_load: f must be planar");
  std::vector<double> load(mesh.vertex_count(), 0.0);
  for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
    const auto& tri = mesh.triangles[k];
    const Point2& a = mesh.vertices[tri[0]];
    const Point2& b = mesh.vertices[tri[1]];
    const Point2& c = mesh.vertices[tri[2]];
    const double area = mesh.triangle_area(k);
    // Edge-midpoint rule: nodes opposite each vertex, phi_i = 1/2 at the two
    // midpoints touching vertex i, 0 at the opposite one.
    const Point2 m01{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    const Point2 m12{0.5 * (b.x + c.x), 0.5 * (b.y + c.y)};
    const Point2 m20{0.5 * (c.x + a.x), 0.5 * (c.y + a.y)};
    const double f01 = f.eval(m01.x, m01.y);
    const double f12 = f.eval(m12.x, m12.y);
    const double f20 = f.eval(m20.x, m20.y);
    const double w = area / 3.0;
    load[tri[0]] += w * 0.5 * (f01 + f20);
    load[tri[1]] += w * 0.5 * (f01 + f12);
    load[tri[2]] += w * 0.5 * (f12 + f20);
  }
  return load;
}

std::vector<Point2> mesh_hole_centers(const Mesh& mesh) {
  if (!mesh.holes.empty()) {
    std::vector<Point2> centers;
    centers.reserve(mesh.holes.size());
    for (const Hole& h : mesh.holes) centers.push_back({h.cx, h.cy});
    return centers;
  }
  // Average the distinct rim vertices per hole; exact for regular polygons.
  std::map<int, std::map<int, Point2>> rims;
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    if (e.tag.kind != BoundaryTag::Kind::Hole) continue;
    rims[e.tag.hole][e.a] = mesh.vertices[e.a];
    rims[e.tag.hole][e.b] = mesh.vertices[e.b];
  }
  int max_hole = -1;
  for (const auto& [k, verts] : rims) max_hole = std::max(max_hole, k);
  std::vector<Point2> centers(max_hole + 1);
  for (const auto& [k, verts] : rims) {
    double sx = 0.0, sy = 0.0;
    for (const auto& [vid, p] : verts) {
      sx += p.x;
      sy += p.y;
    }
    centers[k] = {sx / verts.size(), sy / verts.size()};
  }
  return centers;
}

std::vector<double> assemble_robin_load(const Mesh& mesh, BoundaryFilter filter,
                                        double alpha,
                                        const AnalyticFunction& data) {
  data.validate();
  if (alpha < 0.0)
    throw std::invalid_argument("assemble_robin_load: alpha must be >= 0");
  std::vector<double> load(mesh.vertex_count(), 0.0);
  if (alpha == 0.0) return load;

  std::vector<Point2> centers;
  const bool need_centers =
      data.is_sphere_trace() &&
      (filter == BoundaryFilter::Holes || filter == BoundaryFilter::All);
  if (need_centers) centers = mesh_hole_centers(mesh);

  const double gauss_off = 0.5 / std::sqrt(3.0);
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    if (!edge_matches(e, filter)) continue;
    const bool hole_edge = e.tag.kind == BoundaryTag::Kind::Hole;
    if (hole_edge && !data.is_sphere_trace())
      throw std::invalid_argument(
          "assemble_robin_load: hole edges need sphere-trace data");
    if (!hole_edge && !data.is_planar())
      throw std::invalid_argument(
          "assemble_robin_load: outer edges need planar data");
    const Point2& a = mesh.vertices[e.a];
    const Point2& b = mesh.vertices[e.b];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    for (int q = 0; q < 2; ++q) {
      const double s = 0.5 + (q == 0 ? -gauss_off : gauss_off);
      const double px = a.x + s * (b.x - a.x);
      const double py = a.y + s * (b.y - a.y);
      double g;
      if (hole_edge) {
        const Point2& ctr = centers.at(e.tag.hole);
        g = data.eval_angle(std::atan2(py - ctr.y, px - ctr.x));
      } else {
        g = data.eval(px, py);
      }
      const double w = alpha * g * len / 2.0;
      load[e.a] += w * (1.0 - s);
      load[e.b] += w * s;
    }
  }
  return load;
}

CgResult solve_cg(const LinearSystem& system, double rel_tol, int max_iter) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw std::invalid_argument("solve_cg: rel_tol must be in (0,1)");
  const SparseSymMatrix& A = system.matrix;
  const std::vector<double>& b = system.rhs;
  if (static_cast<int>(b.size()) != A.n)
    throw std::invalid_argument("solve_cg: dimension mismatch");

  auto dot = [](const std::vector<double>& u, const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
  };

  const double bnorm = std::sqrt(dot(b, b));
  CgResult result;
  result.x.assign(A.n, 0.0);
  if (bnorm == 0.0) return result;

  std::vector<double> inv_diag = A.diagonal();
  for (double& d : inv_diag) d = (d > 0.0) ? 1.0 / d : 1.0;

  std::vector<double> r = b, z(A.n), p(A.n), Ap(A.n);
  for (int i = 0; i < A.n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);
  const double target = rel_tol * bnorm;

  for (int it = 1; it <= max_iter; ++it) {
    A.matvec(p, Ap);
    const double pAp = dot(p, Ap);
    if (pAp <= 0.0)
      throw std::runtime_error("solve_cg: matrix is not positive definite");
    const double step = rz / pAp;
    for (int i = 0; i < A.n; ++i) result.x[i] += step * p[i];
    for (int i = 0; i < A.n; ++i) r[i] -= step * Ap[i];
    result.iterations = it;
    if (std::sqrt(dot(r, r)) <= target) {
      // confirm with the true residual (guards against drift)
      A.matvec(result.x, Ap);
      double tr = 0.0;
      for (int i = 0; i < A.n; ++i) {
        const double d = Ap[i] - b[i];
        tr += d * d;
      }
      if (std::sqrt(tr) <= target) return result;
      for (int i = 0; i < A.n; ++i) r[i] = b[i] - Ap[i];
    }
    for (int i = 0; i < A.n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_new = dot(r, z);
    for (int i = 0; i < A.n; ++i) p[i] = z[i] + (rz_new / rz) * p[i];
    rz = rz_new;
  }
  throw std::runtime_error("solve_cg: no convergence within max_iter");
}

namespace {

double quad_l2_sq(const ScalarField& field,
                  const std::function<double(double, double)>& ref) {
  const Mesh& mesh = *field.mesh;
  double total = 0.0;
  for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
    const auto& tri = mesh.triangles[k];
    const Point2& a = mesh.vertices[tri[0]];
    const Point2& b = mesh.vertices[tri[1]];
    const Point2& c = mesh.vertices[tri[2]];
    const double va = field.values[tri[0]];
    const double vb = field.values[tri[1]];
    const double vc = field.values[tri[2]];
    const double area = mesh.triangle_area(k);
    const double w = area / 3.0;
    const double pts[3][2] = {{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)},
                              {0.5 * (b.x + c.x), 0.5 * (b.y + c.y)},
                              {0.5 * (c.x + a.x), 0.5 * (c.y + a.y)}};
    const double uh[3] = {0.5 * (va + vb), 0.5 * (vb + vc), 0.5 * (vc + va)};
    for (int q = 0; q < 3; ++q) {
      const double d = uh[q] - ref(pts[q][0], pts[q][1]);
      total += w * d * d;
    }
  }
  return total;
}

}  // namespace

double l2_error(const ScalarField& field, const AnalyticFunction& reference) {
  reference.validate();
  if (!reference.is_planar())
    throw std::invalid_argument("l2_error: reference must be planar");
  return std::sqrt(quad_l2_sq(
      field, [&](double x, double y) { return reference.eval(x, y); }));
}

double l2_error(const ScalarField& field, const ScalarField& reference) {
  return std::sqrt(quad_l2_sq(field, [&](double x, double y) {
    const auto loc = locate_point(*reference.mesh, x, y);
    if (!loc)
      throw std::runtime_error("l2_error: quadrature point outside reference mesh");
    const auto& tri = reference.mesh->triangles[loc->triangle];
    return loc->barycentric[0] * reference.values[tri[0]] +
           loc->barycentric[1] * reference.values[tri[1]] +
           loc->barycentric[2] * reference.values[tri[2]];
  }));
}

double eval_field(const ScalarField& field, double px, double py) {
  const auto loc = locate_point(*field.mesh, px, py);
  if (!loc) throw std::runtime_error("eval_field: point outside mesh");
  const auto& tri = field.mesh->triangles[loc->triangle];
  return loc->barycentric[0] * field.values[tri[0]] +
         loc->barycentric[1] * field.values[tri[1]] +
         loc->barycentric[2] * field.values[tri[2]];
}

void write_field(std::ostream& out, const ScalarField& field) {
  out << "field " << field.values.size() << '\n';
  char buf[40];
  for (double v : field.values) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", v);
    out << buf;
  }
}

std::vector<double> read_field_values(std::istream& in) {
  std::string word;
  std::size_t n = 0;
  if (!(in >> word >> n) || word != "field")
    throw std::runtime_error("read_field: bad header");
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i)
    if (!(in >> values[i])) throw std::runtime_error("read_field: short file");
  return values;
}

void save_field(const std::string& path, const ScalarField& field) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_field: cannot open " + path);
  write_field(out, field);
}

}  // namespace stl
