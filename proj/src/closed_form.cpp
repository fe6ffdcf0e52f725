#include "stl/closed_form.hpp"

#include <cmath>
#include <numbers>

namespace stl {

namespace {
constexpr double kPi = std::numbers::pi;
}

void AuxiliaryProfile::validate() const {
  if (!(radius > 0.0 && radius < epsilon))
    throw std::invalid_argument("AuxiliaryProfile: need 0 < radius < epsilon");
  if (alpha < 0.0)
    throw std::invalid_argument("AuxiliaryProfile: alpha must be >= 0");
  if (dimension < 2)
    throw std::invalid_argument("AuxiliaryProfile: dimension must be >= 2");
}

double omega_n(int dimension) {
  if (dimension < 2) throw std::invalid_argument("omega_n: N must be >= 2");
  const double n = static_cast<double>(dimension);
  return 2.0 * std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0);
}

double q_boundary(const AuxiliaryProfile& p) {
  p.validate();
  if (p.dimension == 2)
    return 1.0 / (1.0 + p.alpha * p.radius * std::log(p.epsilon / p.radius));
  const double nm2 = static_cast<double>(p.dimension - 2);
  const double ratio = std::pow(p.radius / p.epsilon, nm2);
  return 1.0 / (1.0 + p.alpha * p.radius / nm2 * (1.0 - ratio));
}

double q_profile(const AuxiliaryProfile& p, double rho) {
  p.validate();
  if (rho < p.radius)
    throw std::invalid_argument("q_profile: rho inside the hole");
  if (rho >= p.epsilon) return 1.0;
  if (p.dimension == 2) {
    return (1.0 + p.alpha * p.radius * std::log(rho / p.radius)) /
           (1.0 + p.alpha * p.radius * std::log(p.epsilon / p.radius));
  }
  const double nm2 = static_cast<double>(p.dimension - 2);
  const double num = nm2 + p.alpha * p.radius * (1.0 - std::pow(p.radius / rho, nm2));
  const double den =
      nm2 + p.alpha * p.radius * (1.0 - std::pow(p.radius / p.epsilon, nm2));
  return num / den;
}

double robin_residual_at_hole(const AuxiliaryProfile& p) {
  p.validate();
  // Analytic radial derivative of the annulus formula at rho = r.
  double dq_drho;
  if (p.dimension == 2) {
    const double den = 1.0 + p.alpha * p.radius * std::log(p.epsilon / p.radius);
    dq_drho = p.alpha / den;  // (alpha r / rho) / den at rho = r
  } else {
    const double nm2 = static_cast<double>(p.dimension - 2);
    const double den =
        nm2 + p.alpha * p.radius * (1.0 - std::pow(p.radius / p.epsilon, nm2));
    // d/drho [-alpha r (r/rho)^(N-2)] = alpha r (N-2) r^(N-2) rho^(-N+1);
    // at rho = r this is alpha (N-2).
    dq_drho = p.alpha * nm2 / den;
  }
  return -dq_drho + p.alpha * q_boundary(p);
}

double eta_coefficient(double alpha, double S, int dimension,
                       double domain_area) {
  if (!(domain_area > 0.0))
    throw std::invalid_argument("eta_coefficient: domain area must be > 0");
  if (S < 0.0) throw std::invalid_argument("eta_coefficient: S must be >= 0");
  if (alpha < 0.0)
    throw std::invalid_argument("eta_coefficient: alpha must be >= 0");
  return alpha * S * omega_n(dimension) / domain_area;
}

double h_mean(const AnalyticFunction& h, int dimension, int quad_points) {
  h.validate();
  if (!h.is_sphere_trace())
    throw std::invalid_argument("h_mean: data must be a sphere-trace function");
  if (h.is_constant()) return h.params[0];
  if (dimension != 2)
    throw std::invalid_argument(
        "h_mean: non-constant data is only supported for N = 2");
  if (quad_points < 4)
    throw std::invalid_argument("h_mean: need at least 4 quadrature nodes");
  // Equispaced trapezoid on the circle, normalized by 2 pi.
  double sum = 0.0;
  for (int j = 0; j < quad_points; ++j)
    sum += h.eval_angle(2.0 * kPi * j / quad_points);
  return sum / quad_points;
}

double gamma_closed_form(const HomogenizedCoefficients& coeffs,
                         double zeta_integral) {
  return coeffs.eta * coeffs.h_bar * zeta_integral;
}

double gamma_discrete_sum(const MicrostructureSpec& spec,
                          const Lattice& lattice, const AnalyticFunction& zeta,
                          const AnalyticFunction& g, int quad_points) {
  spec.validate();
  if (spec.dimension != 2)
    throw std::invalid_argument("gamma_discrete_sum: N = 2 only");
  if (quad_points < 8)
    throw std::invalid_argument("gamma_discrete_sum: need >= 8 quadrature nodes");
  if (!zeta.is_planar())
    throw std::invalid_argument("gamma_discrete_sum: zeta must be planar");
  if (!g.is_sphere_trace())
    throw std::invalid_argument("gamma_discrete_sum: g must be a sphere trace");
  if (lattice.centers.empty())
    throw std::runtime_error("gamma_discrete_sum: no inclusions (empty lattice)");

  const double r = hole_radius(spec);
  const AuxiliaryProfile profile{spec.epsilon, r, spec.alpha, 2};
  const double q_bnd = q_boundary(profile);

  double total = 0.0;
  const double dtheta = 2.0 * kPi / quad_points;
  for (const auto& c : lattice.centers) {
    double ring = 0.0;
    for (int j = 0; j < quad_points; ++j) {
      const double theta = dtheta * j;
      ring += zeta.eval(c[0] + r * std::cos(theta), c[1] + r * std::sin(theta)) *
              g.eval_angle(theta);
    }
    total += ring * dtheta;
  }
  return spec.alpha * q_bnd * r * total;
}

HomogenizedCoefficients make_homogenized_coefficients(double alpha, double S,
                                                      int dimension,
                                                      double domain_area,
                                                      double h_bar) {
  HomogenizedCoefficients c;
  c.alpha = alpha;
  c.S = S;
  c.omega_N = omega_n(dimension);
  c.h_bar = h_bar;
  c.eta = eta_coefficient(alpha, S, dimension, domain_area);
  c.source_shift = c.eta * h_bar;
  return c;
}

}  // namespace stl
