#include "cmae/pluripotential.hpp"

#include <cmath>
#include <limits>

#include "radial_flux.hpp"

namespace cmae {

namespace {

void require_nonpositive(std::span<const double> phi, const char* who) {
  for (double v : phi)
    if (v > kTolPsh) throw std::invalid_argument(std::string(who) + ": field has positive values");
}

void require_psh(double min_interior, const char* who) {
  if (min_interior < -kTolPsh)
    throw std::invalid_argument(std::string(who) +
                                ": field is not plurisubharmonic (discrete density " +
                                std::to_string(min_interior) + ")");
}

}  // namespace

MADensityGrid ma_density(const ScalarField2D& u) {
  const GridDomain& g = *u.grid;
  MADensityGrid out{u.grid, std::vector<double>(u.values.size()), 0.0};
  double mn = std::numeric_limits<double>::max();
  const double h = g.h;
  for (size_t p = 0; p < u.values.size(); ++p) {
    // Unequal-arm second differences along each axis; arm values beyond the
    // boundary are the zero Dirichlet trace.
    double lap = 0.0;
    for (int axis = 0; axis < 2; ++axis) {
      const int dp = 2 * axis;      // E or N
      const int dm = 2 * axis + 1;  // W or S
      const double hp = g.arm[p][dp] * h, hm = g.arm[p][dm] * h;
      const double up = g.neighbor[p][dp] >= 0 ? u.values[g.neighbor[p][dp]] : 0.0;
      const double um = g.neighbor[p][dm] >= 0 ? u.values[g.neighbor[p][dm]] : 0.0;
      lap += 2.0 * (up / (hp * (hp + hm)) + um / (hm * (hp + hm)) - u.values[p] / (hp * hm));
    }
    out.values[p] = 0.25 * lap;
    mn = std::min(mn, out.values[p]);
  }
  out.min_interior = u.values.empty() ? 0.0 : mn;
  return out;
}

MADensityRadial ma_density(const RadialProfile& u) {
  const RadialDomain& d = *u.dom;
  const int N = d.num_nodes();
  const int n = d.spec.n;
  const double h = d.h;
  const auto& v = u.values;

  // Flux form: the cell average of the density against the weight n t^{n-1}
  // equals the difference of Phi = s^n (v')^n across the cell; second-order
  // accurate, and the exact inverse of solve_ma_radial's quadrature.
  const auto sp = detail::halfnode_powers(d);
  const auto D = detail::midpoint_derivatives(d, v);

  MADensityRadial out{u.dom, std::vector<double>(N), 0.0};
  double phi_prev = sp[0] * detail::ipow(D[0], n);
  for (int i = 1; i + 1 < N; ++i) {
    const double phi = sp[i] * detail::ipow(D[i], n);
    out.values[i] = (phi - phi_prev) / (sp[i] - sp[i - 1]);
    phi_prev = phi;
  }

  // s = 0 is a regular point where the density is (v'(0))^n; extrapolate v'
  // to the origin from the first two midpoints. The undershoot of the
  // extrapolation is spurious when both midpoint slopes are admissible.
  double d0 = 0.5 * (3.0 * D[0] - D[1]);
  if (D[0] >= 0.0 && D[1] >= 0.0 && d0 < 0.0) d0 = 0.0;
  out.values[0] = detail::ipow(d0, n);

  // Boundary node s = R^2: one-sided second-order differences.
  {
    const double vp = (3.0 * v[N - 1] - 4.0 * v[N - 2] + v[N - 3]) / (2.0 * h);
    const double vpp = (2.0 * v[N - 1] - 5.0 * v[N - 2] + 4.0 * v[N - 3] - v[N - 4]) / (h * h);
    out.values[N - 1] = detail::ipow(vp, n - 1) * (vp + d.s[N - 1] * vpp);
  }

  double mn = std::numeric_limits<double>::max();
  for (int i = 0; i + 1 < N; ++i) mn = std::min(mn, out.values[i]);  // s = R^2 exempt
  out.min_interior = mn;
  return out;
}

namespace {

template <class Dom>
double energy_impl(const Dom& dom, std::span<const double> phi,
                   const std::vector<double>& density, double min_interior) {
  require_nonpositive(phi, "energy");
  require_psh(min_interior, "energy");
  const int n = dom.spec.n;
  std::vector<double> integrand(phi.size());
  for (size_t i = 0; i < phi.size(); ++i) integrand[i] = -phi[i] * density[i];
  return integrate_values(dom, integrand) / (n + 1);
}

template <class Dom>
double integral_I_impl(const Dom& dom, std::span<const double> phi,
                       const std::vector<double>& fv) {
  require_nonpositive(phi, "integral_I");
  const int n = dom.spec.n;
  std::vector<double> integrand(phi.size());
  for (size_t i = 0; i < phi.size(); ++i)
    integrand[i] = std::pow(std::max(-phi[i], 0.0), n + 1) * fv[i];
  return integrate_values(dom, integrand) / (n + 1);
}

}  // namespace

double energy(const ScalarField2D& phi) {
  auto md = ma_density(phi);
  return energy_impl(*phi.grid, phi.values, md.values, md.min_interior);
}

double energy(const RadialProfile& phi) {
  auto md = ma_density(phi);
  return energy_impl(*phi.dom, phi.values, md.values, md.min_interior);
}

double integral_I(const ScalarField2D& phi, const DensitySpec& f) {
  return integral_I_impl(*phi.grid, phi.values, density_values(*phi.grid, f));
}

double integral_I(const RadialProfile& phi, const DensitySpec& f) {
  return integral_I_impl(*phi.dom, phi.values, density_values(*phi.dom, f));
}

namespace {

template <class FieldT>
double rayleigh_impl(const FieldT& phi, const DensitySpec& f) {
  if (sup_abs(phi) <= kTolZero)
    throw std::invalid_argument("rayleigh: quotient undefined for the zero field");
  const double E = energy(phi);
  const double I = integral_I(phi, f);
  if (!(I > 0.0)) throw std::invalid_argument("rayleigh: I_mu vanishes");
  return E / I;
}

template <class FieldT, class Dom>
double dir_deriv_impl(const Dom& dom, const FieldT& phi, const FieldT& psi, double t) {
  if (phi.values.size() != psi.values.size())
    throw std::invalid_argument("energy_directional_derivative: mismatched fields");
  FieldT mix = phi;
  for (size_t i = 0; i < mix.values.size(); ++i)
    mix.values[i] = (1.0 - t) * phi.values[i] + t * psi.values[i];
  auto md = ma_density(mix);
  require_psh(md.min_interior, "energy_directional_derivative");
  std::vector<double> integrand(mix.values.size());
  for (size_t i = 0; i < integrand.size(); ++i)
    integrand[i] = -(psi.values[i] - phi.values[i]) * md.values[i];
  return integrate_values(dom, integrand);
}

}  // namespace

double rayleigh(const ScalarField2D& phi, const DensitySpec& f) { return rayleigh_impl(phi, f); }
double rayleigh(const RadialProfile& phi, const DensitySpec& f) { return rayleigh_impl(phi, f); }

double energy_directional_derivative(const ScalarField2D& phi, const ScalarField2D& psi,
                                     double t) {
  return dir_deriv_impl(*phi.grid, phi, psi, t);
}

double energy_directional_derivative(const RadialProfile& phi, const RadialProfile& psi,
                                     double t) {
  return dir_deriv_impl(*phi.dom, phi, psi, t);
}

}  // namespace cmae
