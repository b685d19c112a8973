// Domains, grids, quadrature, densities and norms for the complex
// Monge-Ampere eigensolver. All volume-form conventions live here:
// integrals are taken against dV = beta^n, whose density with respect to
// Lebesgue measure on R^{2n} is c_n = 2^n n!.
#pragma once

#include <array>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmae {

// Discretization floors below which the second-order accuracy claims
// of the stencils and quadratures are not honored.
inline constexpr int kMinGridRes = 17;
inline constexpr int kMinRadialRes = 64;

// Absolute tolerance on discrete Monge-Ampere density values when
// checking plurisubharmonicity; discretization introduces signed noise.
inline constexpr double kTolPsh = 1e-8;

// Sup-norm threshold below which a field is treated as identically zero.
inline constexpr double kTolZero = 1e-12;

enum class DomainMode { FullGrid, Radial };

// Ball B(0, radius) in C^n together with its discretization parameters.
// Full-grid mode is n = 1 only; radial mode works for any n >= 1.
struct DomainSpec {
  int n = 1;
  double radius = 1.0;
  DomainMode mode = DomainMode::Radial;
  int grid_res = 0;    // nodes per real axis (full-grid)
  int radial_res = 0;  // s-grid nodes on [0, radius^2] (radial)

  void validate() const;  // throws std::invalid_argument
};

// Lebesgue density of dV = beta^n, i.e. c_n = 2^n n!.
double volume_density_factor(int n);

// Defining function rho(z) = |z|^2 - radius^2 of the ball; point holds
// 2n real coordinates (x_1, y_1, ..., x_n, y_n).
double defining_function(const DomainSpec& spec, std::span<const double> point);

// ---------------------------------------------------------------------------
// Full-grid discretization (n = 1)
//
// Cell-centered grid: grid_res x grid_res cells tile [-R, R]^2, node (i, j)
// sits at the center of cell (i, j). Interior nodes satisfy |z| < R; arms
// toward exterior neighbors are shortened to the boundary crossing found by
// linear interpolation of rho along the grid line (Shortley-Weller).
// ---------------------------------------------------------------------------

struct GridDomain {
  DomainSpec spec;
  int res = 0;
  double h = 0.0;

  // res*res map from lattice node to interior index, -1 outside.
  std::vector<int> interior_index;
  // Per interior node: lattice coordinates, fractional arm lengths in (0, 1]
  // (order E, W, N, S), interior index of the neighbor (-1 = boundary arm),
  // and the quadrature weight in dV units (c_1 * clipped cell area, with
  // boundary-cell areas attributed to the nearest interior node).
  std::vector<std::array<int, 2>> nodes;
  std::vector<std::array<double, 4>> arm;
  std::vector<std::array<int, 4>> neighbor;
  std::vector<double> weight;

  double x(int i) const { return -spec.radius + (i + 0.5) * h; }
  double y(int j) const { return -spec.radius + (j + 0.5) * h; }
  int num_interior() const { return static_cast<int>(nodes.size()); }
};

// Uniform s-grid on [0, R^2], s = |z|^2. weight[i] is the dV-quadrature
// weight of node i (trapezoid rule on s^{n-1} times 2^n n pi^n), so that
// integrate = sum_i weight[i] * g(s_i) for radial integrands.
struct RadialDomain {
  DomainSpec spec;
  double h = 0.0;
  std::vector<double> s;
  std::vector<double> weight;

  int num_nodes() const { return static_cast<int>(s.size()); }
};

GridDomain build_grid_domain(const DomainSpec& spec);
RadialDomain build_radial_domain(const DomainSpec& spec);

// Area of the intersection of the disk x^2 + y^2 <= R^2 with the axis
// aligned rectangle [xa, xb] x [ya, yb]; exact up to roundoff.
double disk_rect_area(double radius, double xa, double xb, double ya, double yb);

// ---------------------------------------------------------------------------
// Fields
// ---------------------------------------------------------------------------

// Discrete Dirichlet field on a full grid: one value per interior node,
// boundary trace identically zero by construction.
struct ScalarField2D {
  std::shared_ptr<const GridDomain> grid;
  std::vector<double> values;
};

// Radial field v(s) on the s-grid; Dirichlet fields satisfy v(R^2) = 0.
struct RadialProfile {
  std::shared_ptr<const RadialDomain> dom;
  std::vector<double> values;
};

ScalarField2D make_field(std::shared_ptr<const GridDomain> grid,
                         const std::vector<double>& values);
RadialProfile make_profile(std::shared_ptr<const RadialDomain> dom,
                           const std::vector<double>& values);

double sup_abs(const ScalarField2D& f);
double sup_abs(const RadialProfile& f);

// ---------------------------------------------------------------------------
// Densities: the measure mu = f dV with inf f > 0 on the closed ball.
// ---------------------------------------------------------------------------

struct DensitySpec {
  enum class Kind { Constant, RadialPoly, GaussianBump };

  Kind kind = Kind::Constant;
  double c = 1.0;               // Constant
  std::vector<double> coeffs;   // RadialPoly: f(s) = sum_k coeffs[k] s^k
  double base = 1.0;            // GaussianBump: base + amp*exp(-|z-z0|^2/(2 sigma^2))
  double amplitude = 0.0;
  double center_x = 0.0;
  double center_y = 0.0;
  double sigma = 1.0;

  static DensitySpec constant(double value);
  static DensitySpec radial_poly(std::vector<double> coefficients);
  static DensitySpec gaussian_bump(double base, double amplitude, double cx,
                                   double cy, double sigma);

  bool is_radial() const { return kind != Kind::GaussianBump; }
  double eval_radial(double s) const;         // Constant / RadialPoly only
  double eval_xy(double x, double y) const;   // n = 1 evaluation
  double sup_on(const DomainSpec& spec) const;
  void validate(const DomainSpec& spec) const;
};

std::vector<double> density_values(const GridDomain& grid, const DensitySpec& f);
std::vector<double> density_values(const RadialDomain& dom, const DensitySpec& f);

// ---------------------------------------------------------------------------
// Quadrature: integral of a nodal integrand against dV. Full-grid mode uses
// the clipped cell-area weights; radial mode reduces to a 1D trapezoid via
// int g dV = 2^n n pi^n int_0^{R^2} s^{n-1} g(s) ds.
// ---------------------------------------------------------------------------

double integrate_values(const GridDomain& grid, std::span<const double> vals);
double integrate_values(const RadialDomain& dom, std::span<const double> vals);
double integrate(const ScalarField2D& g);
double integrate(const RadialProfile& g);

// L^{n+1}(mu) norm of a nonpositive field: (int (-phi)^{n+1} f dV)^{1/(n+1)}.
// Rejects phi with positive values beyond kTolPsh.
double norm_lnp1_mu(const ScalarField2D& phi, const DensitySpec& f);
double norm_lnp1_mu(const RadialProfile& phi, const DensitySpec& f);

}  // namespace cmae
