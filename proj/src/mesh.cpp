#include "stl/mesh.hpp"

#include "stl/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace stl {

std::size_t Mesh::edge_count() const {
  std::set<std::pair<int, int>> edges;
  for (const auto& t : triangles)
    for (int e = 0; e < 3; ++e) {
      int a = t[e], b = t[(e + 1) % 3];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  return edges.size();
}

double Mesh::triangle_area(std::size_t t) const {
  const Point2& a = vertices[triangles[t][0]];
  const Point2& b = vertices[triangles[t][1]];
  const Point2& c = vertices[triangles[t][2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

double Mesh::total_area() const {
  double sum = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) sum += triangle_area(t);
  return sum;
}

Mesh mesh_rectangle(const DomainSpec& domain, double h) {
  domain.validate();
  if (!(h > 0.0) || h >= std::min(domain.width(), domain.height()))
    throw std::invalid_argument("mesh_rectangle: need 0 < h < min side length");
  const int nx = static_cast<int>(std::ceil(domain.width() / h - 1e-12));
  const int ny = static_cast<int>(std::ceil(domain.height() / h - 1e-12));
  if (2LL * nx * ny > 10'000'000LL)
    throw std::invalid_argument("mesh_rectangle: more than 1e7 triangles");

  Mesh m;
  m.domain = domain;
  m.structured = true;
  m.nx = nx;
  m.ny = ny;
  m.h = std::max(domain.width() / nx, domain.height() / ny);

  m.vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.vertices.push_back({domain.xmin + domain.width() * i / nx,
                            domain.ymin + domain.height() * j / ny});

  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v11 = vid(i + 1, j + 1), v01 = vid(i, j + 1);
      m.triangles.push_back({v00, v10, v11});
      m.triangles.push_back({v00, v11, v01});
    }

  for (int i = 0; i < nx; ++i)
    m.boundary_edges.push_back({vid(i, 0), vid(i + 1, 0), {}});
  for (int j = 0; j < ny; ++j)
    m.boundary_edges.push_back({vid(nx, j), vid(nx, j + 1), {}});
  for (int i = nx; i > 0; --i)
    m.boundary_edges.push_back({vid(i, ny), vid(i - 1, ny), {}});
  for (int j = ny; j > 0; --j)
    m.boundary_edges.push_back({vid(0, j), vid(0, j - 1), {}});
  return m;
}

MeshQualityReport quality_report(const Mesh& mesh) {
  MeshQualityReport r;
  r.triangle_count = mesh.triangle_count();
  r.vertex_count = mesh.vertex_count();
  r.min_angle_deg = 180.0;
  r.max_aspect = 0.0;
  r.h_min = std::numeric_limits<double>::infinity();
  r.h_max = 0.0;
  for (const auto& t : mesh.triangles) {
    const Point2& a = mesh.vertices[t[0]];
    const Point2& b = mesh.vertices[t[1]];
    const Point2& c = mesh.vertices[t[2]];
    const double la = std::hypot(c.x - b.x, c.y - b.y);
    const double lb = std::hypot(a.x - c.x, a.y - c.y);
    const double lc = std::hypot(b.x - a.x, b.y - a.y);
    const double area =
        0.5 * std::fabs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
    const double lmax = std::max({la, lb, lc});
    const double lmin = std::min({la, lb, lc});
    r.h_min = std::min(r.h_min, lmin);
    r.h_max = std::max(r.h_max, lmax);
    r.max_aspect = std::max(r.max_aspect, lmax / (2.0 * area / lmax));
    auto angle = [](double opp, double s1, double s2) {
      double cosv = (s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2);
      return std::acos(std::clamp(cosv, -1.0, 1.0)) * 180.0 / 3.14159265358979323846;
    };
    const double amin = std::min(
        {angle(la, lb, lc), angle(lb, lc, la), angle(lc, la, lb)});
    r.min_angle_deg = std::min(r.min_angle_deg, amin);
  }
  return r;
}

namespace {

std::optional<PointLocation> barycentric_in(const Mesh& mesh, std::size_t t,
                                            double px, double py,
                                            double tol) {
  const Point2& a = mesh.vertices[mesh.triangles[t][0]];
  const Point2& b = mesh.vertices[mesh.triangles[t][1]];
  const Point2& c = mesh.vertices[mesh.triangles[t][2]];
  const double det = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  const double wb = ((px - a.x) * (c.y - a.y) - (py - a.y) * (c.x - a.x)) / det;
  const double wc = ((b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x)) / det;
  const double wa = 1.0 - wb - wc;
  if (wa >= -tol && wb >= -tol && wc >= -tol)
    return PointLocation{t, {wa, wb, wc}};
  return std::nullopt;
}

}  // namespace

std::optional<PointLocation> locate_point(const Mesh& mesh, double px,
                                          double py) {
  constexpr double kTol = 1e-12;
  if (mesh.triangles.empty()) return std::nullopt;

  if (mesh.structured) {
    const DomainSpec& d = mesh.domain;
    if (px < d.xmin - kTol || px > d.xmax + kTol || py < d.ymin - kTol ||
        py > d.ymax + kTol)
      return std::nullopt;
    const double dx = d.width() / mesh.nx;
    const double dy = d.height() / mesh.ny;
    const int i = std::clamp(static_cast<int>((px - d.xmin) / dx), 0, mesh.nx - 1);
    const int j = std::clamp(static_cast<int>((py - d.ymin) / dy), 0, mesh.ny - 1);
    const double lx = (px - d.xmin) / dx - i;
    const double ly = (py - d.ymin) / dy - j;
    const std::size_t cell = 2 * (static_cast<std::size_t>(j) * mesh.nx + i);
    const std::size_t t = (ly <= lx) ? cell : cell + 1;
    if (auto loc = barycentric_in(mesh, t, px, py, kTol)) return loc;
    // fp ties at the diagonal: try the sibling triangle
    return barycentric_in(mesh, (t == cell) ? cell + 1 : cell, px, py, kTol);
  }

  // Unstructured: walk by orientation from a fixed seed.
  const double p[2] = {px, py};
  std::size_t t = 0;
  const std::size_t max_steps = 4 * mesh.triangles.size() + 16;

  // Edge -> triangle map for the walk; a walk blocked by a hole falls back
  // to the exhaustive scan below.
  std::map<std::pair<int, int>, std::array<long, 2>> edge2tri;
  for (std::size_t k = 0; k < mesh.triangles.size(); ++k)
    for (int e = 0; e < 3; ++e) {
      int u = mesh.triangles[k][e], v = mesh.triangles[k][(e + 1) % 3];
      auto key = std::minmax(u, v);
      auto it = edge2tri.find({key.first, key.second});
      if (it == edge2tri.end())
        edge2tri[{key.first, key.second}] = {static_cast<long>(k), -1};
      else
        it->second[1] = static_cast<long>(k);
    }

  for (std::size_t step = 0; step < max_steps; ++step) {
    int cross = -1;
    for (int e = 0; e < 3; ++e) {
      const Point2& u = mesh.vertices[mesh.triangles[t][e]];
      const Point2& v = mesh.vertices[mesh.triangles[t][(e + 1) % 3]];
      const double uu[2] = {u.x, u.y}, vv[2] = {v.x, v.y};
      if (orient2d(uu, vv, p) < 0.0) {
        cross = e;
        break;
      }
    }
    if (cross < 0) return barycentric_in(mesh, t, px, py, kTol);
    int u = mesh.triangles[t][cross], v = mesh.triangles[t][(cross + 1) % 3];
    auto key = std::minmax(u, v);
    const auto& pair = edge2tri.at({key.first, key.second});
    const long other =
        (pair[0] == static_cast<long>(t)) ? pair[1] : pair[0];
    if (other < 0) break;  // hit a boundary; fall through to scan
    t = static_cast<std::size_t>(other);
  }

  for (std::size_t k = 0; k < mesh.triangles.size(); ++k)
    if (auto loc = barycentric_in(mesh, k, px, py, kTol)) return loc;
  return std::nullopt;
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  char buf[64];
  out << "mesh 2 " << mesh.vertices.size() << ' ' << mesh.triangles.size()
      << ' ' << mesh.boundary_edges.size() << '\n';
  for (const Point2& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "v %.17g %.17g\n", v.x, v.y);
    out << buf;
  }
  for (const auto& t : mesh.triangles)
    out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    out << "b " << e.a << ' ' << e.b << ' ';
    if (e.tag.kind == BoundaryTag::Kind::Outer)
      out << "outer\n";
    else
      out << "hole:" << e.tag.hole << '\n';
  }
}

Mesh read_mesh(std::istream& in) {
  std::string word;
  int dim = 0;
  std::size_t nv = 0, nt = 0, nb = 0;
  if (!(in >> word >> dim >> nv >> nt >> nb) || word != "mesh" || dim != 2)
    throw std::invalid_argument("read_mesh: bad header");
  Mesh m;
  m.vertices.reserve(nv);
  m.triangles.reserve(nt);
  m.boundary_edges.reserve(nb);
  for (std::size_t i = 0; i < nv; ++i) {
    Point2 p;
    if (!(in >> word >> p.x >> p.y) || word != "v")
      throw std::invalid_argument("read_mesh: bad vertex line");
    m.vertices.push_back(p);
  }
  for (std::size_t i = 0; i < nt; ++i) {
    std::array<int, 3> t{};
    if (!(in >> word >> t[0] >> t[1] >> t[2]) || word != "t")
      throw std::invalid_argument("read_mesh: bad triangle line");
    m.triangles.push_back(t);
  }
  for (std::size_t i = 0; i < nb; ++i) {
    BoundaryEdge e;
    std::string tag;
    if (!(in >> word >> e.a >> e.b >> tag) || word != "b")
      throw std::invalid_argument("read_mesh: bad boundary line");
    if (tag == "outer") {
      e.tag.kind = BoundaryTag::Kind::Outer;
    } else if (tag.rfind("hole:", 0) == 0) {
      e.tag.kind = BoundaryTag::Kind::Hole;
      e.tag.hole = std::stoi(tag.substr(5));
    } else {
      throw std::invalid_argument("read_mesh: bad boundary tag " + tag);
    }
    m.boundary_edges.push_back(e);
  }
  const int n = static_cast<int>(m.vertices.size());
  for (const auto& t : m.triangles)
    for (int v : t)
      if (v < 0 || v >= n)
        throw std::invalid_argument("read_mesh: triangle index out of range");
  for (const auto& e : m.boundary_edges)
    if (e.a < 0 || e.a >= n || e.b < 0 || e.b >= n)
      throw std::invalid_argument("read_mesh: boundary index out of range");
  return m;
}

void save_mesh(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_mesh: cannot open " + path);
  write_mesh(out, mesh);
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_mesh: cannot open " + path);
  return read_mesh(in);
}

}  // namespace stl
