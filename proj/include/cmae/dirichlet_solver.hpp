// Dirichlet solvers for (dd^c psi)^n = g dV, psi = 0 on the boundary, and
// the inverse-iteration step operator T mapping phi to the solution of
// (dd^c psi)^n = R(phi) (-phi)^n f dV.
#pragma once

#include "cmae/geometry.hpp"

namespace cmae {

struct SolverConfig {
  double tol_lin = 1e-10;    // relative linear-solve residual (full grid)
  double tol_solver = 1e-8;  // sup-norm accuracy target for psi
  int max_lin_iters = 10000;

  void validate() const;
};

class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Full-grid operator (n = 1). Owns the factorized Shortley-Weller Laplacian
// of its domain, so repeated solves share one factorization.
class FullGridOperator {
 public:
  using Field = ScalarField2D;

  FullGridOperator(std::shared_ptr<const GridDomain> grid, SolverConfig config);
  ~FullGridOperator();
  FullGridOperator(FullGridOperator&&) noexcept;
  FullGridOperator& operator=(FullGridOperator&&) noexcept;
  FullGridOperator(const FullGridOperator&) = delete;
  FullGridOperator& operator=(const FullGridOperator&) = delete;

  const GridDomain& domain() const { return *grid_; }
  std::shared_ptr<const GridDomain> domain_ptr() const { return grid_; }
  const SolverConfig& config() const { return config_; }

  // Solve Delta psi = 4 g with zero boundary data; g >= 0 nodewise.
  ScalarField2D solve_ma(std::span<const double> g) const;

  // One inverse-iteration step with a precomputed Rayleigh quotient.
  ScalarField2D step(const ScalarField2D& phi, const std::vector<double>& f_nodes,
                     double rayleigh_value) const;

  ScalarField2D apply_T(const ScalarField2D& phi, const DensitySpec& f) const;

 private:
  std::shared_ptr<const GridDomain> grid_;
  SolverConfig config_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Radial operator (any n). The Dirichlet problem reduces to two cumulative
// quadratures through d/ds [ s^n (v')^n ] = n s^{n-1} g(s).
class RadialOperator {
 public:
  using Field = RadialProfile;

  RadialOperator(std::shared_ptr<const RadialDomain> dom, SolverConfig config);

  const RadialDomain& domain() const { return *dom_; }
  std::shared_ptr<const RadialDomain> domain_ptr() const { return dom_; }
  const SolverConfig& config() const { return config_; }

  RadialProfile solve_ma(std::span<const double> g) const;
  RadialProfile step(const RadialProfile& phi, const std::vector<double>& f_nodes,
                     double rayleigh_value) const;
  RadialProfile apply_T(const RadialProfile& phi, const DensitySpec& f) const;

 private:
  std::shared_ptr<const RadialDomain> dom_;
  SolverConfig config_;
};

// One-shot conveniences; each builds the mode-appropriate operator.
ScalarField2D solve_ma_fullgrid(std::span<const double> g, const DomainSpec& spec,
                                const SolverConfig& config);
RadialProfile solve_ma_radial(std::span<const double> g, const DomainSpec& spec);
ScalarField2D apply_T(const ScalarField2D& phi, const DensitySpec& f,
                      const SolverConfig& config);
RadialProfile apply_T(const RadialProfile& phi, const DensitySpec& f,
                      const SolverConfig& config);

}  // namespace cmae
