#include "stl/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace stl {

void MicrostructureSpec::validate() const {
  domain.validate();
  if (!(epsilon > 0.0))
    throw std::invalid_argument("MicrostructureSpec: epsilon must be > 0");
  if (alpha < 0.0)
    throw std::invalid_argument("MicrostructureSpec: alpha must be >= 0");
  if (dimension < 2)
    throw std::invalid_argument("MicrostructureSpec: dimension must be >= 2");
  if (!(radius_coefficient > 0.0))
    throw std::invalid_argument(
        "MicrostructureSpec: radius_coefficient must be > 0");
  hole_radius(*this);  // enforces r < eps
}

double hole_radius(const MicrostructureSpec& spec) {
  const double n = static_cast<double>(spec.dimension);
  const double r =
      spec.radius_coefficient * std::pow(spec.epsilon, n / (n - 1.0));
  if (!(r < spec.epsilon))
    throw std::invalid_argument(
        "hole_radius: radius law gives r >= epsilon (hole leaves its cell)");
  return r;
}

namespace {

// Axis extents of the box: dim 0 is the x-range, every other dim the y-range.
void axis_extent(const DomainSpec& d, int axis, double& lo, double& hi) {
  if (axis == 0) {
    lo = d.xmin;
    hi = d.xmax;
  } else {
    lo = d.ymin;
    hi = d.ymax;
  }
}

}  // namespace

Lattice build_lattice(const MicrostructureSpec& spec) {
  spec.validate();
  const int n = spec.dimension;
  const double eps = spec.epsilon;
  const double pitch = 2.0 * eps;

  // Candidate integer ranges per axis: 2*eps*k must have distance >= eps to
  // both box faces, i.e. lo + eps <= 2*eps*k <= hi - eps.
  std::vector<long> kmin(n), kmax(n);
  for (int a = 0; a < n; ++a) {
    double lo, hi;
    axis_extent(spec.domain, a, lo, hi);
    kmin[a] = static_cast<long>(std::ceil((lo + eps) / pitch - 1e-12));
    kmax[a] = static_cast<long>(std::floor((hi - eps) / pitch + 1e-12));
  }

  Lattice lattice;
  lattice.epsilon = eps;
  std::vector<long> k(kmin);
  bool any_empty = false;
  for (int a = 0; a < n; ++a)
    if (kmin[a] > kmax[a]) any_empty = true;
  if (any_empty) return lattice;

  // Odometer enumeration produces lexicographic order directly.
  while (true) {
    std::vector<double> p(n);
    for (int a = 0; a < n; ++a) p[a] = pitch * static_cast<double>(k[a]);
    lattice.centers.push_back(std::move(p));
    int a = n - 1;
    while (a >= 0) {
      if (++k[a] <= kmax[a]) break;
      k[a] = kmin[a];
      --a;
    }
    if (a < 0) break;
  }
  return lattice;
}

std::vector<Hole> build_holes(const MicrostructureSpec& spec) {
  if (spec.dimension != 2)
    throw std::invalid_argument("build_holes: only N = 2 is meshable");
  const double r = hole_radius(spec);
  const Lattice lattice = build_lattice(spec);
  std::vector<Hole> holes;
  holes.reserve(lattice.size());
  for (const auto& c : lattice.centers) holes.push_back({c[0], c[1], r});
  return holes;
}

double finite_S(std::size_t center_count, double radius, int dimension) {
  if (!(radius > 0.0)) throw std::invalid_argument("finite_S: radius must be > 0");
  return static_cast<double>(center_count) *
         std::pow(radius, static_cast<double>(dimension - 1));
}

double finite_S(const Lattice& lattice, double radius, int dimension) {
  return finite_S(lattice.size(), radius, dimension);
}

double limit_S(const MicrostructureSpec& spec) {
  spec.validate();
  const double n = static_cast<double>(spec.dimension);
  return spec.domain.area() * std::pow(spec.radius_coefficient, n - 1.0) /
         std::pow(2.0, n);
}

bool point_in_perforated_domain(double px, double py, const DomainSpec& domain,
                                const std::vector<Hole>& holes) {
  if (!(px > domain.xmin && px < domain.xmax && py > domain.ymin &&
        py < domain.ymax))
    return false;
  for (const Hole& h : holes) {
    const double dx = px - h.cx;
    const double dy = py - h.cy;
    if (dx * dx + dy * dy <= h.radius * h.radius) return false;
  }
  return true;
}

}  // namespace stl
