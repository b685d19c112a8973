#include "cmae/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cmae {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Floor on the fractional arm length, guarding the division in the
// unequal-arm stencil against a boundary crossing that lands on a node.
constexpr double kMinArm = 1e-8;

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

}  // namespace

void DomainSpec::validate() const {
  if (n < 1) throw std::invalid_argument("DomainSpec: complex dimension n must be >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("DomainSpec: radius must be positive");
  if (mode == DomainMode::FullGrid) {
    if (n != 1) throw std::invalid_argument("DomainSpec: full-grid mode requires n = 1");
    if (grid_res < kMinGridRes)
      throw std::invalid_argument("DomainSpec: grid_res must be >= " + std::to_string(kMinGridRes));
  } else {
    if (radial_res < kMinRadialRes)
      throw std::invalid_argument("DomainSpec: radial_res must be >= " + std::to_string(kMinRadialRes));
  }
}

double volume_density_factor(int n) {
  double c = 1.0;
  for (int k = 1; k <= n; ++k) c *= 2.0 * k;  // 2^n n!
  return c;
}

double defining_function(const DomainSpec& spec, std::span<const double> point) {
  if (point.size() != static_cast<size_t>(2 * spec.n))
    throw std::invalid_argument("defining_function: point must have 2n coordinates");
  double s = 0.0;
  for (double c : point) s += c * c;
  return s - spec.radius * spec.radius;
}

// ---------------------------------------------------------------------------
// Exact disk/rectangle clipping.
//
// Phi(x, y) below is the area of {X <= x, Y <= y} inside the disk of radius
// R; rectangle areas follow by inclusion-exclusion. S is the antiderivative
// of sqrt(R^2 - t^2).
// ---------------------------------------------------------------------------

namespace {

double seg_primitive(double radius, double t) {
  t = clamp(t, -radius, radius);
  const double rad = std::sqrt(std::max(radius * radius - t * t, 0.0));
  return 0.5 * (t * rad + radius * radius * std::asin(clamp(t / radius, -1.0, 1.0)));
}

// Area of the disk part with X <= x.
double halfplane_area(double radius, double x) {
  return 2.0 * (seg_primitive(radius, x) - seg_primitive(radius, -radius));
}

double corner_area(double radius, double x, double y) {
  if (x <= -radius || y <= -radius) return 0.0;
  if (x >= radius) return halfplane_area(radius, y);
  if (y >= radius) return halfplane_area(radius, x);
  if (y < 0.0) return halfplane_area(radius, x) - corner_area(radius, x, -y);

  const double xy = std::sqrt(std::max(radius * radius - y * y, 0.0));
  double area = 2.0 * (seg_primitive(radius, std::min(x, -xy)) - seg_primitive(radius, -radius));
  if (x > -xy) {
    const double xm = std::min(x, xy);
    area += y * (xm + xy) + (seg_primitive(radius, xm) - seg_primitive(radius, -xy));
  }
  if (x > xy) area += 2.0 * (seg_primitive(radius, x) - seg_primitive(radius, xy));
  return area;
}

}  // namespace

double disk_rect_area(double radius, double xa, double xb, double ya, double yb) {
  if (xb <= xa || yb <= ya) return 0.0;
  const double a = corner_area(radius, xb, yb) - corner_area(radius, xa, yb) -
                   corner_area(radius, xb, ya) + corner_area(radius, xa, ya);
  return std::max(a, 0.0);
}

// ---------------------------------------------------------------------------
// Domain construction
// ---------------------------------------------------------------------------

GridDomain build_grid_domain(const DomainSpec& spec) {
  spec.validate();
  if (spec.mode != DomainMode::FullGrid)
    throw std::invalid_argument("build_grid_domain: spec is not full-grid");

  GridDomain g;
  g.spec = spec;
  g.res = spec.grid_res;
  g.h = 2.0 * spec.radius / spec.grid_res;
  const double R2 = spec.radius * spec.radius;
  const int res = g.res;

  g.interior_index.assign(static_cast<size_t>(res) * res, -1);
  for (int j = 0; j < res; ++j) {
    for (int i = 0; i < res; ++i) {
      const double xx = g.x(i), yy = g.y(j);
      if (xx * xx + yy * yy < R2) {
        g.interior_index[static_cast<size_t>(j) * res + i] = static_cast<int>(g.nodes.size());
        g.nodes.push_back({i, j});
      }
    }
  }

  auto index_of = [&](int i, int j) -> int {
    if (i < 0 || i >= res || j < 0 || j >= res) return -1;
    return g.interior_index[static_cast<size_t>(j) * res + i];
  };

  const int di[4] = {1, -1, 0, 0};  // E, W, N, S
  const int dj[4] = {0, 0, 1, -1};
  g.arm.resize(g.nodes.size());
  g.neighbor.resize(g.nodes.size());
  for (size_t p = 0; p < g.nodes.size(); ++p) {
    const auto [i, j] = g.nodes[p];
    const double xx = g.x(i), yy = g.y(j);
    for (int d = 0; d < 4; ++d) {
      const int q = index_of(i + di[d], j + dj[d]);
      g.neighbor[p][d] = q;
      if (q >= 0) {
        g.arm[p][d] = 1.0;
      } else {
        // Exact boundary crossing along the grid line: rho is quadratic in
        // the running coordinate, so the root is available in closed form
        // (and the cut-cell stencil stays exact on quadratics).
        const double fixed = (d < 2) ? yy : xx;
        const double moving = (d < 2) ? xx : yy;
        const double cross = std::sqrt(std::max(R2 - fixed * fixed, 0.0));
        const double sign = (di[d] + dj[d]) > 0 ? 1.0 : -1.0;
        const double theta = (sign * cross - moving) / (sign * g.h);
        g.arm[p][d] = clamp(theta, kMinArm, 1.0);
      }
    }
  }

  // Quadrature weights: every lattice cell's clipped area is attributed to
  // an interior node (its own center, else the nearest interior center
  // within two rings), so the weights sum to the exact disk area.
  g.weight.assign(g.nodes.size(), 0.0);
  const double c1 = volume_density_factor(1);
  double total_area = 0.0;
  for (int j = 0; j < res; ++j) {
    for (int i = 0; i < res; ++i) {
      const double xc = g.x(i), yc = g.y(j);
      const double area = disk_rect_area(spec.radius, xc - 0.5 * g.h, xc + 0.5 * g.h,
                                         yc - 0.5 * g.h, yc + 0.5 * g.h);
      // Inclusion-exclusion of O(R^2) corner areas leaves O(eps R^2) noise
      // on cells that barely miss the disk; drop it.
      if (area <= 1e-13 * R2) continue;
      total_area += area;
      int target = index_of(i, j);
      if (target < 0) {
        double best = std::numeric_limits<double>::max();
        for (int ring = 1; ring <= 2 && target < 0; ++ring) {
          for (int bj = -ring; bj <= ring; ++bj) {
            for (int bi = -ring; bi <= ring; ++bi) {
              if (std::max(std::abs(bi), std::abs(bj)) != ring) continue;
              const int q = index_of(i + bi, j + bj);
              if (q < 0) continue;
              const double dx = g.x(i + bi) - xc, dy = g.y(j + bj) - yc;
              const double dist = dx * dx + dy * dy;
              if (dist < best) {
                best = dist;
                target = q;
              }
            }
          }
        }
      }
      if (target < 0)
        throw std::logic_error("build_grid_domain: boundary cell with no interior node nearby");
      g.weight[target] += c1 * area;
    }
  }

  const double disk_area = kPi * R2;
  if (std::abs(total_area - disk_area) > 1e-9 * disk_area)
    throw std::logic_error("build_grid_domain: clipped areas do not sum to the disk area");
  return g;
}

RadialDomain build_radial_domain(const DomainSpec& spec) {
  spec.validate();
  if (spec.mode != DomainMode::Radial)
    throw std::invalid_argument("build_radial_domain: spec is not radial");

  RadialDomain d;
  d.spec = spec;
  const int N = spec.radial_res;
  const double R2 = spec.radius * spec.radius;
  d.h = R2 / (N - 1);
  d.s.resize(N);
  for (int i = 0; i < N; ++i) d.s[i] = R2 * static_cast<double>(i) / (N - 1);
  d.s.back() = R2;

  // int g dV = c_n (pi^n/n!) n int_0^{R^2} s^{n-1} g ds, trapezoid in s.
  const int n = spec.n;
  double K = volume_density_factor(n) * n;
  for (int k = 1; k <= n; ++k) K *= kPi / k;
  d.weight.resize(N);
  for (int i = 0; i < N; ++i) {
    const double trap = (i == 0 || i == N - 1) ? 0.5 : 1.0;
    d.weight[i] = K * trap * d.h * std::pow(d.s[i], n - 1);
  }
  if (n == 1) d.weight[0] = K * 0.5 * d.h;  // pow(0,0) guard
  return d;
}

// ---------------------------------------------------------------------------
// Fields
// ---------------------------------------------------------------------------

ScalarField2D make_field(std::shared_ptr<const GridDomain> grid,
                         const std::vector<double>& values) {
  if (!grid || static_cast<int>(values.size()) != grid->num_interior())
    throw std::invalid_argument("make_field: value count does not match interior nodes");
  return ScalarField2D{std::move(grid), values};
}

RadialProfile make_profile(std::shared_ptr<const RadialDomain> dom,
                           const std::vector<double>& values) {
  if (!dom || static_cast<int>(values.size()) != dom->num_nodes())
    throw std::invalid_argument("make_profile: value count does not match s-grid nodes");
  return RadialProfile{std::move(dom), values};
}

double sup_abs(const ScalarField2D& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double sup_abs(const RadialProfile& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------------------
// Densities
// ---------------------------------------------------------------------------

DensitySpec DensitySpec::constant(double value) {
  DensitySpec f;
  f.kind = Kind::Constant;
  f.c = value;
  return f;
}

DensitySpec DensitySpec::radial_poly(std::vector<double> coefficients) {
  DensitySpec f;
  f.kind = Kind::RadialPoly;
  f.coeffs = std::move(coefficients);
  return f;
}

DensitySpec DensitySpec::gaussian_bump(double base, double amplitude, double cx,
                                       double cy, double sigma) {
  DensitySpec f;
  f.kind = Kind::GaussianBump;
  f.base = base;
  f.amplitude = amplitude;
  f.center_x = cx;
  f.center_y = cy;
  f.sigma = sigma;
  return f;
}

double DensitySpec::eval_radial(double s) const {
  switch (kind) {
    case Kind::Constant:
      return c;
    case Kind::RadialPoly: {
      double v = 0.0;
      for (size_t k = coeffs.size(); k-- > 0;) v = v * s + coeffs[k];
      return v;
    }
    case Kind::GaussianBump:
      throw std::invalid_argument("DensitySpec: gaussian bump is not radial");
  }
  return 0.0;
}

double DensitySpec::eval_xy(double x, double y) const {
  if (kind == Kind::GaussianBump) {
    const double dx = x - center_x, dy = y - center_y;
    return base + amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
  }
  return eval_radial(x * x + y * y);
}

double DensitySpec::sup_on(const DomainSpec& spec) const {
  const double R2 = spec.radius * spec.radius;
  switch (kind) {
    case Kind::Constant:
      return c;
    case Kind::RadialPoly: {
      double m = 0.0;
      const int samples = 4096;
      for (int i = 0; i <= samples; ++i)
        m = std::max(m, eval_radial(R2 * static_cast<double>(i) / samples));
      return m;
    }
    case Kind::GaussianBump:
      return base + std::max(amplitude, 0.0);
  }
  return 0.0;
}

void DensitySpec::validate(const DomainSpec& spec) const {
  if (kind == Kind::GaussianBump) {
    if (spec.mode != DomainMode::FullGrid)
      throw std::invalid_argument("DensitySpec: gaussian bump requires full-grid mode");
    if (!(sigma > 0.0)) throw std::invalid_argument("DensitySpec: sigma must be positive");
    if (!(base > 0.0) || base + std::min(amplitude, 0.0) <= 0.0)
      throw std::invalid_argument("DensitySpec: gaussian bump must be strictly positive");
    return;
  }
  if (kind == Kind::RadialPoly && coeffs.empty())
    throw std::invalid_argument("DensitySpec: radial polynomial needs coefficients");
  // inf f > 0 on the closed ball, checked on a fine sample of [0, R^2].
  const double R2 = spec.radius * spec.radius;
  const int samples = 4096;
  for (int i = 0; i <= samples; ++i) {
    if (!(eval_radial(R2 * static_cast<double>(i) / samples) > 0.0))
      throw std::invalid_argument("DensitySpec: density must be strictly positive on the closed ball");
  }
}

std::vector<double> density_values(const GridDomain& grid, const DensitySpec& f) {
  f.validate(grid.spec);
  std::vector<double> out(grid.nodes.size());
  for (size_t p = 0; p < grid.nodes.size(); ++p)
    out[p] = f.eval_xy(grid.x(grid.nodes[p][0]), grid.y(grid.nodes[p][1]));
  return out;
}

std::vector<double> density_values(const RadialDomain& dom, const DensitySpec& f) {
  if (!f.is_radial())
    throw std::invalid_argument("density_values: non-radial density on a radial domain");
  f.validate(dom.spec);
  std::vector<double> out(dom.s.size());
  for (size_t i = 0; i < dom.s.size(); ++i) out[i] = f.eval_radial(dom.s[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Quadrature and norms
// ---------------------------------------------------------------------------

namespace {

double weighted_sum(std::span<const double> w, std::span<const double> v) {
  if (w.size() != v.size())
    throw std::invalid_argument("integrate: integrand size does not match domain");
  double acc = 0.0;
  for (size_t i = 0; i < w.size(); ++i) {
    if (std::isnan(v[i])) throw std::invalid_argument("integrate: NaN integrand value");
    acc += w[i] * v[i];
  }
  return acc;
}

}  // namespace

double integrate_values(const GridDomain& grid, std::span<const double> vals) {
  return weighted_sum(grid.weight, vals);
}

double integrate_values(const RadialDomain& dom, std::span<const double> vals) {
  return weighted_sum(dom.weight, vals);
}

double integrate(const ScalarField2D& g) { return integrate_values(*g.grid, g.values); }
double integrate(const RadialProfile& g) { return integrate_values(*g.dom, g.values); }

namespace {

template <class Dom>
double norm_impl(const Dom& dom, std::span<const double> phi, const std::vector<double>& fv) {
  const int n = dom.spec.n;
  std::vector<double> integrand(phi.size());
  for (size_t i = 0; i < phi.size(); ++i) {
    if (phi[i] > kTolPsh)
      throw std::invalid_argument("norm_lnp1_mu: field has positive values");
    integrand[i] = std::pow(std::max(-phi[i], 0.0), n + 1) * fv[i];
  }
  return std::pow(integrate_values(dom, integrand), 1.0 / (n + 1));
}

}  // namespace

double norm_lnp1_mu(const ScalarField2D& phi, const DensitySpec& f) {
  return norm_impl(*phi.grid, phi.values, density_values(*phi.grid, f));
}

double norm_lnp1_mu(const RadialProfile& phi, const DensitySpec& f) {
  return norm_impl(*phi.dom, phi.values, density_values(*phi.dom, f));
}

}  // namespace cmae
