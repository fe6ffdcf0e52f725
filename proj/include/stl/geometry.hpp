#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace stl {

/// Axis-aligned rectangle (x,y); higher-dimensional coefficient code treats
/// extra axes as copies of the y-extent.
struct DomainSpec {
  double xmin = 0.0;
  double xmax = 1.0;
  double ymin = 0.0;
  double ymax = 1.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }

  void validate() const {
    if (!(xmax > xmin) || !(ymax > ymin))
      throw std::invalid_argument("DomainSpec: degenerate rectangle");
  }
};

/// Full parameterization of the perforated domain: lattice pitch 2*epsilon,
/// hole radius law r = c_r * eps^(N/(N-1)), Robin coefficient alpha.
struct MicrostructureSpec {
  double epsilon = 0.125;
  double alpha = 1.0;
  int dimension = 2;
  double radius_coefficient = 1.0;  // c_r
  DomainSpec domain;

  void validate() const;
};

struct Lattice {
  std::vector<std::vector<double>> centers;  // sorted lexicographically
  double epsilon = 0.0;

  std::size_t size() const { return centers.size(); }
};

struct Hole {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
};

/// Hole radius r = c_r * eps^(N/(N-1)); throws if the law would give r >= eps.
double hole_radius(const MicrostructureSpec& spec);

/// All points of the lattice 2*eps*Z^N whose distance to the box boundary is
/// >= eps (closed inequality, ties included), sorted lexicographically.
Lattice build_lattice(const MicrostructureSpec& spec);

/// Lattice as 2-D holes of the microstructure's radius (N = 2 only).
std::vector<Hole> build_holes(const MicrostructureSpec& spec);

/// Finite-epsilon approximant |L_eps| * r^(N-1) of the capacity density S_N.
double finite_S(const Lattice& lattice, double radius, int dimension);
double finite_S(std::size_t center_count, double radius, int dimension);

/// The eps->0 limit |Omega| * c_r^(N-1) / 2^N of finite_S.
double limit_S(const MicrostructureSpec& spec);

/// True iff p is in the open rectangle and outside every closed hole.
bool point_in_perforated_domain(double px, double py, const DomainSpec& domain,
                                const std::vector<Hole>& holes);

}  // namespace stl
