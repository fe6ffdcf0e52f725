#include "stl/mesh.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

using namespace stl;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Shared invariants: orientation, Euler identity with k holes, boundary tag
// cycles, and the area identity against the analytic value.
void check_invariants(const Mesh& mesh, std::size_t holes, double area) {
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t)
    CHECK(mesh.triangle_area(t) > 0.0);

  const long long v = static_cast<long long>(mesh.vertex_count());
  const long long e = static_cast<long long>(mesh.edge_count());
  const long long tt = static_cast<long long>(mesh.triangle_count());
  CHECK(v - e + tt == 1 - static_cast<long long>(holes));

  // every boundary edge appears in exactly one triangle, with the domain on
  // its left; successor map per tag forms closed cycles
  std::map<std::pair<int, int>, int> edge_use;
  for (const auto& tri : mesh.triangles)
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      edge_use[{a, b}] += 1;
    }
  std::map<int, std::vector<std::pair<int, int>>> by_tag;
  for (const auto& be : mesh.boundary_edges) {
    CHECK(edge_use.count({be.a, be.b}) == 1);
    CHECK(edge_use.count({be.b, be.a}) == 0);
    const int tag = be.tag.kind == BoundaryTag::Kind::Outer ? -1 : be.tag.hole;
    by_tag[tag].push_back({be.a, be.b});
  }
  CHECK(by_tag.size() == holes + 1);
  for (const auto& [tag, edges] : by_tag) {
    std::map<int, int> next;
    for (const auto& [a, b] : edges) {
      CHECK(next.count(a) == 0);
      next[a] = b;
    }
    std::set<int> seen;
    int cur = edges.front().first;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      CHECK(seen.insert(cur).second);
      cur = next.at(cur);
    }
    CHECK(cur == edges.front().first);
  }

  CHECK(mesh.total_area() == doctest::Approx(area).epsilon(1e-12));
}

double polygon_hole_area(double r, int segments) {
  return 0.5 * segments * r * r * std::sin(2.0 * kPi / segments);
}

}  // namespace

TEST_CASE("mesh_rectangle structured grid") {
  DomainSpec dom;
  const Mesh mesh = mesh_rectangle(dom, 0.25);
  CHECK(mesh.vertex_count() == 25);
  CHECK(mesh.triangle_count() == 32);
  CHECK(mesh.structured);
  check_invariants(mesh, 0, 1.0);
  const MeshQualityReport q = quality_report(mesh);
  CHECK(q.min_angle_deg == doctest::Approx(45.0).epsilon(1e-10));
}

TEST_CASE("mesh_rectangle non-square cells") {
  DomainSpec dom;
  dom.xmax = 2.0;
  const Mesh mesh = mesh_rectangle(dom, 0.3);
  check_invariants(mesh, 0, 2.0);
  const MeshQualityReport q = quality_report(mesh);
  CHECK(q.h_max <= 0.3 * std::sqrt(2.0) + 1e-12);
  CHECK_THROWS_AS(mesh_rectangle(dom, 1.5), std::invalid_argument);
}

TEST_CASE("mesh_perforated invariants for one hole") {
  DomainSpec dom;
  std::vector<Hole> holes = {{0.5, 0.5, 0.0625}};
  const Mesh mesh = mesh_perforated(dom, holes, 0.1, 16);
  // rim polygons are inscribed with max(min_segments, ceil(4 pi)) sides;
  // refinement splits stay on the chords, so the removed area is unchanged
  const int segs = 16;
  check_invariants(mesh, 1, 1.0 - polygon_hole_area(0.0625, segs));
  const MeshQualityReport q = quality_report(mesh);
  CHECK(q.min_angle_deg >= 20.0 - 1e-9);

  // no vertex strictly inside a hole polygon: conservative radial check
  for (const auto& p : mesh.vertices) {
    const double d = std::hypot(p.x - 0.5, p.y - 0.5);
    CHECK(d >= 0.0625 * std::cos(kPi / segs) - 1e-12);
  }
}

TEST_CASE("mesh_perforated determinism") {
  DomainSpec dom;
  std::vector<Hole> holes = {{0.25, 0.25, 0.03}, {0.75, 0.75, 0.03}};
  const Mesh a = mesh_perforated(dom, holes, 0.08, 12);
  const Mesh b = mesh_perforated(dom, holes, 0.08, 12);
  REQUIRE(a.vertex_count() == b.vertex_count());
  REQUIRE(a.triangle_count() == b.triangle_count());
  for (std::size_t i = 0; i < a.vertex_count(); ++i) {
    CHECK(a.vertices[i].x == b.vertices[i].x);
    CHECK(a.vertices[i].y == b.vertices[i].y);
  }
  for (std::size_t t = 0; t < a.triangle_count(); ++t)
    CHECK(a.triangles[t] == b.triangles[t]);
}

TEST_CASE("mesh_perforated argument validation") {
  DomainSpec dom;
  CHECK_THROWS_AS(mesh_perforated(dom, {{0.5, 0.5, 0.1}}, 0.0, 16),
                  std::invalid_argument);
  CHECK_THROWS_AS(mesh_perforated(dom, {{0.5, 0.5, 0.1}}, 0.1, 2),
                  std::invalid_argument);
  // hole touching the outer boundary
  CHECK_THROWS_AS(mesh_perforated(dom, {{0.05, 0.5, 0.1}}, 0.1, 16),
                  std::invalid_argument);
  // overlapping holes
  CHECK_THROWS_AS(
      mesh_perforated(dom, {{0.4, 0.5, 0.1}, {0.5, 0.5, 0.1}}, 0.1, 16),
      std::invalid_argument);
}

TEST_CASE("locate_point on structured and perforated meshes") {
  DomainSpec dom;
  {
    const Mesh mesh = mesh_rectangle(dom, 0.25);
    const auto loc = locate_point(mesh, 0.3, 0.7);
    REQUIRE(loc.has_value());
    double x = 0.0, y = 0.0;
    for (int k = 0; k < 3; ++k) {
      x += loc->barycentric[k] * mesh.vertices[mesh.triangles[loc->triangle][k]].x;
      y += loc->barycentric[k] * mesh.vertices[mesh.triangles[loc->triangle][k]].y;
    }
    CHECK(x == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(y == doctest::Approx(0.7).epsilon(1e-12));
    CHECK_FALSE(locate_point(mesh, 1.2, 0.5).has_value());
  }
  {
    const Mesh mesh = mesh_perforated(dom, {{0.5, 0.5, 0.0625}}, 0.1, 16);
    CHECK(locate_point(mesh, 0.9, 0.1).has_value());
    CHECK_FALSE(locate_point(mesh, 0.5, 0.5).has_value());
    const auto loc = locate_point(mesh, 0.2, 0.8);
    REQUIRE(loc.has_value());
    for (double b : loc->barycentric) CHECK(b >= -1e-12);
  }
}

TEST_CASE("mesh io round trip") {
  DomainSpec dom;
  const Mesh mesh = mesh_perforated(dom, {{0.5, 0.5, 0.0625}}, 0.12, 12);
  std::stringstream s;
  write_mesh(s, mesh);
  const Mesh back = read_mesh(s);
  REQUIRE(back.vertex_count() == mesh.vertex_count());
  REQUIRE(back.triangle_count() == mesh.triangle_count());
  REQUIRE(back.boundary_edges.size() == mesh.boundary_edges.size());
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
    CHECK(back.vertices[i].x == mesh.vertices[i].x);
    CHECK(back.vertices[i].y == mesh.vertices[i].y);
  }
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t)
    CHECK(back.triangles[t] == mesh.triangles[t]);
  for (std::size_t i = 0; i < mesh.boundary_edges.size(); ++i) {
    CHECK(back.boundary_edges[i].a == mesh.boundary_edges[i].a);
    CHECK(back.boundary_edges[i].b == mesh.boundary_edges[i].b);
    CHECK(back.boundary_edges[i].tag == mesh.boundary_edges[i].tag);
  }
  // write again: byte-identical
  std::stringstream s2;
  write_mesh(s2, back);
  std::stringstream s3;
  write_mesh(s3, mesh);
  CHECK(s2.str() == s3.str());
}

TEST_CASE("read_mesh rejects malformed input") {
  std::stringstream bad("mesh 2 1 0 0\nv 0 0\n");
  CHECK_NOTHROW(read_mesh(bad));
  std::stringstream wrong_magic("grid 2 0 0 0\n");
  CHECK_THROWS_AS(read_mesh(wrong_magic), std::invalid_argument);
  std::stringstream bad_index("mesh 2 2 1 0\nv 0 0\nv 1 0\nt 0 1 5\n");
  CHECK_THROWS_AS(read_mesh(bad_index), std::invalid_argument);
}
