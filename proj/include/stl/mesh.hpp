#pragma once

#include "stl/geometry.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace stl {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct BoundaryTag {
  enum class Kind { Outer, Hole };
  Kind kind = Kind::Outer;
  int hole = -1;  // valid when kind == Hole

  bool operator==(const BoundaryTag&) const = default;
};

struct BoundaryEdge {
  int a = -1;
  int b = -1;
  BoundaryTag tag;
};

/// Conforming triangulation of the (possibly perforated) rectangle.
/// Triangles are counterclockwise; boundary edges carry their origin tag.
struct Mesh {
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  double h = 0.0;  // characteristic size

  // Geometry metadata, not serialized. Empty for plain rectangle meshes.
  std::vector<Hole> holes;
  DomainSpec domain;

  // Set for structured rectangle meshes; enables O(1) point location.
  bool structured = false;
  int nx = 0;
  int ny = 0;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t triangle_count() const { return triangles.size(); }
  std::size_t edge_count() const;  // distinct undirected edges
  double triangle_area(std::size_t t) const;
  double total_area() const;
};

struct MeshQualityReport {
  double min_angle_deg = 0.0;
  double max_aspect = 0.0;  // longest edge / shortest altitude
  std::size_t triangle_count = 0;
  std::size_t vertex_count = 0;
  double h_min = 0.0;
  double h_max = 0.0;
};

struct PointLocation {
  std::size_t triangle = 0;
  std::array<double, 3> barycentric{};
};

/// Uniform grid of squares of side <= h, each split into two triangles.
Mesh mesh_rectangle(const DomainSpec& domain, double h);

/// Constrained Delaunay triangulation of the rectangle with the holes'
/// inscribed polygons removed, Ruppert-refined to min angle >= 20 degrees
/// with a graded size field from r/2 at rims to h_far in the bulk.
Mesh mesh_perforated(const DomainSpec& domain, const std::vector<Hole>& holes,
                     double h_far, int min_segments);

MeshQualityReport quality_report(const Mesh& mesh);

/// Containing triangle and barycentric coordinates (each >= -1e-12, summing
/// to 1), or nullopt when p lies in a hole or outside the rectangle.
std::optional<PointLocation> locate_point(const Mesh& mesh, double px,
                                          double py);

void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);
void save_mesh(const std::string& path, const Mesh& mesh);
Mesh load_mesh(const std::string& path);

}  // namespace stl
