// Independent ground-truth computations used by the acceptance tests:
// the Bessel reduction of the n = 1 disk problem, a nonlinear radial
// shooting oracle for any n, and a comparison-principle probe. The
// shooting discretization (series start + fixed-step 4th-order marching)
// is deliberately different from the solver's cumulative trapezoid, so
// agreement between the two is evidence rather than tautology.
#pragma once

#include <utility>

#include "cmae/dirichlet_solver.hpp"
#include "cmae/geometry.hpp"

namespace cmae {

// J_0 by its power series (accurate for |x| <= 4, where the first zero lives).
double bessel_j0(double x);

// First positive zero of J_0, by bisection on [2, 3] to ~1e-13.
double bessel_j01();

// n = 1, f = c: dd^c u = -lambda u c dV reduces to Delta u = -4 lambda c u,
// so lambda_1 = j01^2 / (4 c R^2).
double bessel_lambda1(double radius, double c);

struct ShootingOptions {
  int ode_steps = 0;                       // 0: derived from the domain spec
  std::pair<double, double> bracket{0, 0}; // 0: default around the Bessel guess
  double target = 1e-10;                   // bisection stops at |v(R^2)| <= target
  int series_degree = 30;                  // startup Taylor degree at s = 0
};

// Eigenpair (lambda_1, v) of the radial problem
//   s^{1-n}/n d/ds [ s^n (v')^n ] = lambda^n (-v)^n f(s),  v(R^2) = 0,
// normalized by v(0) = -1 (so sup |v| = 1). v and v' are stored on the
// uniform ODE grid; eval() interpolates them with cubic Hermite pieces.
struct OracleEigenpair {
  double lambda1 = 0.0;
  RadialProfile profile;        // v on the ODE s-grid, sup-norm 1
  std::vector<double> deriv;    // v' at the same nodes
  std::string method;           // "shooting"
  int ode_steps = 0;
  double bisection_residual = 0.0;  // |v(R^2)| at the returned lambda
  bool monotone_mismatch = true;    // empirical scan of v(R^2; lambda)

  double eval(double s) const;
  double eval_deriv(double s) const;
};

OracleEigenpair shooting_eigenpair(const DomainSpec& spec, const DensitySpec& f,
                                   ShootingOptions opts = {});

// Solves the two Dirichlet problems with data g1 >= g2 >= 0 and counts the
// nodes where psi1 > psi2 + tol (tol = 1e-10 relative); the comparison
// principle demands a zero count.
long comparison_principle_probe(std::span<const double> g1, std::span<const double> g2,
                                const DomainSpec& spec, const SolverConfig& config);

}  // namespace cmae
