// Discrete complex Hessians and Monge-Ampere densities, the energy E,
// the weighted integral I_mu, and the Rayleigh quotient R = E / I_mu.
#pragma once

#include "cmae/geometry.hpp"

namespace cmae {

// Nodal values of det(d^2 u / dz_j dz_bar_k). min_interior tracks the
// smallest value over nodes where plurisubharmonicity is checked (all
// interior nodes; the radial boundary node s = R^2 is reported but exempt).
struct MADensityGrid {
  std::shared_ptr<const GridDomain> grid;
  std::vector<double> values;
  double min_interior = 0.0;
};

struct MADensityRadial {
  std::shared_ptr<const RadialDomain> dom;
  std::vector<double> values;
  double min_interior = 0.0;
};

// Full grid, n = 1: u_{z zbar} = Laplacian/4 through the Shortley-Weller
// five-point stencil (zero beyond boundary arms).
MADensityGrid ma_density(const ScalarField2D& u);

// Radial, any n: the operator (v')^{n-1} (v' + s v'') evaluated through its
// flux form s^{1-n}/n d/ds [ s^n (v')^n ] with midpoint differences, making
// it the exact discrete inverse of solve_ma_radial; (v')^n at s = 0 and
// one-sided second-order differences at s = R^2.
MADensityRadial ma_density(const RadialProfile& u);

// Monge-Ampere energy E(phi) = 1/(n+1) int (-phi) (dd^c phi)^n.
// Rejects fields with positive values or densities below -kTolPsh.
double energy(const ScalarField2D& phi);
double energy(const RadialProfile& phi);

// I_mu(phi) = 1/(n+1) int (-phi)^{n+1} f dV.
double integral_I(const ScalarField2D& phi, const DensitySpec& f);
double integral_I(const RadialProfile& phi, const DensitySpec& f);

// Rayleigh quotient R(phi) = E(phi)/I_mu(phi); scale invariant, requires
// sup|phi| > kTolZero.
double rayleigh(const ScalarField2D& phi, const DensitySpec& f);
double rayleigh(const RadialProfile& phi, const DensitySpec& f);

// Analytic derivative of t -> E((1-t) phi + t psi):
// int -(psi - phi) (dd^c phi_t)^n dV. Used by the property tests.
double energy_directional_derivative(const ScalarField2D& phi,
                                     const ScalarField2D& psi, double t);
double energy_directional_derivative(const RadialProfile& phi,
                                     const RadialProfile& psi, double t);

}  // namespace cmae
