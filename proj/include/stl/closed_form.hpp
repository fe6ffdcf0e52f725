#pragma once

#include "stl/analytic.hpp"
#include "stl/geometry.hpp"

namespace stl {

/// Parameters of the radially symmetric corrector q: equal to 1 outside the
/// eps-ball, harmonic in the annulus [radius, eps], homogeneous Robin on the
/// hole rim.
struct AuxiliaryProfile {
  double epsilon = 0.0;
  double radius = 0.0;
  double alpha = 0.0;
  int dimension = 2;

  void validate() const;
};

/// The coefficients entering the homogenized Helmholtz equation
/// (eta - Laplacian) u = f + eta * h_bar.
struct HomogenizedCoefficients {
  double eta = 0.0;           // alpha * S * omega_N / |Omega|
  double source_shift = 0.0;  // eta * h_bar
  double alpha = 0.0;
  double S = 0.0;
  double omega_N = 0.0;
  double h_bar = 0.0;
};

/// Surface measure of the unit sphere in R^N: 2 pi^(N/2) / Gamma(N/2).
double omega_n(int dimension);

/// Constant rim trace q^d of the corrector: (1 + alpha r log(eps/r))^-1 for
/// N = 2, (1 + alpha r/(N-2) (1 - (r/eps)^(N-2)))^-1 for N >= 3.
double q_boundary(const AuxiliaryProfile& profile);

/// Radial profile q(rho): annulus formula on [r, eps], exactly 1 beyond eps.
/// Throws for rho < radius.
double q_profile(const AuxiliaryProfile& profile, double rho);

/// Robin residual (-dq/drho + alpha q) at rho = r with the outward normal of
/// the fluid pointing toward the hole center; zero analytically.
double robin_residual_at_hole(const AuxiliaryProfile& profile);

/// Strange-term coefficient eta = alpha * S * omega_N / |Omega|.
double eta_coefficient(double alpha, double S, int dimension,
                       double domain_area);

/// Spherical mean (1/omega_N) of sphere-trace data h. Constants are exact in
/// any dimension; non-constant data uses M-point trapezoid quadrature on the
/// circle and is rejected for N >= 3.
double h_mean(const AnalyticFunction& h, int dimension, int quad_points);

/// Closed-form gamma[zeta] = eta * h_bar * Int(zeta).
double gamma_closed_form(const HomogenizedCoefficients& coeffs,
                         double zeta_integral);

/// Finite-eps boundary sum alpha * q^d * r^(N-1) * sum over lattice centers
/// of the circle quadrature of zeta(center + r m) g(m). N = 2 only.
double gamma_discrete_sum(const MicrostructureSpec& spec,
                          const Lattice& lattice, const AnalyticFunction& zeta,
                          const AnalyticFunction& g, int quad_points);

HomogenizedCoefficients make_homogenized_coefficients(double alpha, double S,
                                                      int dimension,
                                                      double domain_area,
                                                      double h_bar);

}  // namespace stl
