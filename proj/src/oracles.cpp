#include "cmae/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace cmae {

// ---------------------------------------------------------------------------
// Bessel oracle
// ---------------------------------------------------------------------------

double bessel_j0(double x) {
  // J_0(x) = sum_k (-1)^k (x^2/4)^k / (k!)^2; 30 terms are far below
  // double roundoff for |x| <= 4.
  const double q = -0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 30; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
  }
  return sum;
}

double bessel_j01() {
  double lo = 2.0, hi = 3.0;  // J0(2) > 0 > J0(3)
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    (bessel_j0(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double bessel_lambda1(double radius, double c) {
  if (!(radius > 0.0) || !(c > 0.0))
    throw std::invalid_argument("bessel_lambda1: radius and c must be positive");
  const double j = bessel_j01();
  return j * j / (4.0 * c * radius * radius);
}

// ---------------------------------------------------------------------------
// Truncated power series helpers (startup of the shooting integration).
// A series is its coefficient vector; all operations truncate at the
// working degree.
// ---------------------------------------------------------------------------

namespace {

using Series = std::vector<double>;

Series mul(const Series& a, const Series& b, size_t deg) {
  Series out(deg + 1, 0.0);
  for (size_t i = 0; i < a.size() && i <= deg; ++i)
    for (size_t j = 0; j < b.size() && i + j <= deg; ++j) out[i + j] += a[i] * b[j];
  return out;
}

Series pow_int(const Series& a, int n, size_t deg) {
  Series out(1, 1.0);
  for (int k = 0; k < n; ++k) out = mul(out, a, deg);
  return out;
}

// A^alpha for A(0) > 0 via the standard recurrence for powers of a series.
Series pow_real(const Series& a, double alpha, size_t deg) {
  const double a0 = a[0];
  Series u(deg + 1, 0.0);
  for (size_t k = 1; k <= deg && k < a.size(); ++k) u[k] = a[k] / a0;
  Series c(deg + 1, 0.0);
  c[0] = 1.0;
  for (size_t m = 1; m <= deg; ++m) {
    double acc = 0.0;
    for (size_t j = 1; j <= m; ++j)
      acc += ((alpha + 1.0) * j - static_cast<double>(m)) * u[j] * c[m - j];
    c[m] = acc / static_cast<double>(m);
  }
  const double scale = std::pow(a0, alpha);
  for (double& v : c) v *= scale;
  return c;
}

double eval_series(const Series& a, double s) {
  double v = 0.0;
  for (size_t k = a.size(); k-- > 0;) v = v * s + a[k];
  return v;
}

Series derivative(const Series& a) {
  if (a.size() <= 1) return Series{0.0};
  Series d(a.size() - 1);
  for (size_t k = 1; k < a.size(); ++k) d[k - 1] = a[k] * static_cast<double>(k);
  return d;
}

// Taylor coefficients of the solution of the radial eigen-ODE around s = 0
// with v(0) = -1, obtained by Picard iteration on the integral form
//   (v'(s))^n = n s^{-n} int_0^s t^{n-1} G(t) dt,  G = lambda^n (-v)^n f.
Series solution_series(int n, double lambda, const Series& f_series, size_t deg) {
  const double ln = std::pow(lambda, n);
  Series v(1, -1.0);
  for (size_t pass = 0; pass <= deg + 1; ++pass) {
    Series neg_v(deg + 1, 0.0);
    for (size_t k = 0; k < v.size() && k <= deg; ++k) neg_v[k] = -v[k];
    Series G = mul(pow_int(neg_v, n, deg), f_series, deg);
    for (double& gk : G) gk *= ln;
    Series P(deg + 1, 0.0);  // (v')^n; the weighted integral gives P_k = n G_k/(n+k)
    for (size_t k = 0; k <= deg; ++k) P[k] = n * G[k] / static_cast<double>(n + k);
    Series vp = pow_real(P, 1.0 / n, deg);
    Series vnew(deg + 2, 0.0);
    vnew[0] = -1.0;
    for (size_t k = 0; k <= deg; ++k) vnew[k + 1] = vp[k] / static_cast<double>(k + 1);
    vnew.resize(deg + 1);
    v = std::move(vnew);
  }
  return v;
}

double h_of(double R2, int M) { return R2 / M; }

Series density_series(const DensitySpec& f, size_t deg) {
  Series out(deg + 1, 0.0);
  if (f.kind == DensitySpec::Kind::Constant) {
    out[0] = f.c;
  } else if (f.kind == DensitySpec::Kind::RadialPoly) {
    for (size_t k = 0; k < f.coeffs.size() && k <= deg; ++k) out[k] = f.coeffs[k];
  } else {
    throw std::invalid_argument("shooting_eigenpair: density must be radial");
  }
  return out;
}

// One shot of the outward integration at a fixed lambda. Fills v and v' on
// the uniform grid of M steps over [0, R^2]; returns v(R^2).
//
// The (v, w) vector field w = s^n (v')^n is regular-singular at s = 0, which
// degrades the order of any one-step method started near the origin. The
// solution itself is analytic there, so the first stretch (a fixed fraction
// of the domain, shrunk if the Taylor tail has not converged) is evaluated
// from the power series; classical RK4 marches the remaining, uniformly
// smooth part at clean fourth order.
double integrate_shot(int n, double lambda, const DensitySpec& f, double R2, int M,
                      int series_degree, std::vector<double>* v_out,
                      std::vector<double>* vp_out) {
  const double h = R2 / M;
  const double ln = std::pow(lambda, n);
  const size_t deg = static_cast<size_t>(series_degree);
  const Series fs = density_series(f, deg);
  const Series vs = solution_series(n, lambda, fs, deg);
  const Series vps = derivative(vs);

  int start = std::min(std::max(2, static_cast<int>(std::llround(R2 / 8.0 / h))), M);
  auto series_tail = [&](double s) {
    double t = 0.0;
    for (size_t k = vs.size() >= 4 ? vs.size() - 4 : 0; k < vs.size(); ++k)
      t = std::max(t, std::abs(vs[k]) * std::pow(s, static_cast<double>(k)));
    return t;
  };
  while (start > 2 && series_tail(start * h) > 1e-13) start = (start + 1) / 2;

  auto fval = [&](double s) { return f.eval_radial(s); };
  auto dv = [&](double s, double w) { return std::pow(std::max(w, 0.0), 1.0 / n) / s; };
  auto dw = [&](double s, double v) {
    return n * std::pow(s, n - 1) * ln * std::pow(std::max(-v, 0.0), n) * fval(s);
  };

  std::vector<double> v(M + 1), vp(M + 1);
  for (int i = 0; i <= start; ++i) {
    const double s = i * h;
    v[i] = eval_series(vs, s);
    vp[i] = eval_series(vps, s);
  }
  double vv = v[start];
  double w = std::pow(start * h, n) * std::pow(std::max(vp[start], 0.0), n);
  for (int i = start; i < M; ++i) {
    const double s = i * h;
    const double k1v = dv(s, w), k1w = dw(s, vv);
    const double k2v = dv(s + 0.5 * h, w + 0.5 * h * k1w), k2w = dw(s + 0.5 * h, vv + 0.5 * h * k1v);
    const double k3v = dv(s + 0.5 * h, w + 0.5 * h * k2w), k3w = dw(s + 0.5 * h, vv + 0.5 * h * k2v);
    const double k4v = dv(s + h, w + h * k3w), k4w = dw(s + h, vv + h * k3v);
    vv += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
    v[i + 1] = vv;
    vp[i + 1] = std::pow(std::max(w, 0.0), 1.0 / n) / ((i + 1) * h);
  }
  if (v_out) *v_out = std::move(v);
  if (vp_out) *vp_out = std::move(vp);
  return vv;
}

}  // namespace

// ---------------------------------------------------------------------------
// Shooting oracle
// ---------------------------------------------------------------------------

double OracleEigenpair::eval(double s) const {
  const RadialDomain& d = *profile.dom;
  const double R2 = d.s.back();
  s = std::clamp(s, 0.0, R2);
  const int M = d.num_nodes() - 1;
  int i = std::min(static_cast<int>(s / d.h), M - 1);
  const double t = (s - d.s[i]) / d.h;
  const double t2 = t * t, t3 = t2 * t;
  return profile.values[i] * (2 * t3 - 3 * t2 + 1) + d.h * deriv[i] * (t3 - 2 * t2 + t) +
         profile.values[i + 1] * (-2 * t3 + 3 * t2) + d.h * deriv[i + 1] * (t3 - t2);
}

double OracleEigenpair::eval_deriv(double s) const {
  const RadialDomain& d = *profile.dom;
  s = std::clamp(s, 0.0, d.s.back());
  const int M = d.num_nodes() - 1;
  int i = std::min(static_cast<int>(s / d.h), M - 1);
  const double t = (s - d.s[i]) / d.h;
  return deriv[i] * (1 - t) + deriv[i + 1] * t;
}

OracleEigenpair shooting_eigenpair(const DomainSpec& spec, const DensitySpec& f,
                                   ShootingOptions opts) {
  if (spec.n < 1 || !(spec.radius > 0.0))
    throw std::invalid_argument("shooting_eigenpair: invalid domain");
  if (!f.is_radial())
    throw std::invalid_argument("shooting_eigenpair: density must be radial");
  const double R2 = spec.radius * spec.radius;
  const int n = spec.n;

  int M = opts.ode_steps;
  if (M <= 0) {
    // At least 4x the solver resolution and an exact multiple of its cells.
    const int cells = std::max(spec.radial_res, kMinRadialRes) - 1;
    M = ((4 * (cells + 1) + cells - 1) / cells) * cells;
  }
  if (M < kMinRadialRes - 1)
    throw std::invalid_argument("shooting_eigenpair: ode_steps too small");

  auto mismatch = [&](double lam) {
    return integrate_shot(n, lam, f, R2, M, opts.series_degree, nullptr, nullptr);
  };

  double lo = opts.bracket.first, hi = opts.bracket.second;
  if (!(lo > 0.0) || !(hi > lo)) {
    const double guess = bessel_lambda1(spec.radius, f.eval_radial(0.0));
    lo = 0.1 * guess;
    hi = 10.0 * guess;
  }
  double mlo = mismatch(lo), mhi = mismatch(hi);
  if (!(mlo < 0.0 && mhi > 0.0))
    throw std::invalid_argument("shooting_eigenpair: bracket does not contain a sign change");

  // Empirical monotonicity scan of the mismatch over the bracket.
  bool monotone = true;
  {
    double prev = mlo;
    for (int k = 1; k <= 8; ++k) {
      const double lam = lo + (hi - lo) * k / 9.0;
      const double m = mismatch(lam);
      if (m < prev) monotone = false;
      prev = m;
    }
    if (mhi < prev) monotone = false;
  }

  double mid = 0.5 * (lo + hi), mmid = 0.0;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    mmid = mismatch(mid);
    if (std::abs(mmid) <= opts.target || hi - lo <= 1e-16 * mid) break;
    (mmid < 0.0 ? lo : hi) = mid;
  }

  std::vector<double> v, vp;
  integrate_shot(n, mid, f, R2, M, opts.series_degree, &v, &vp);

  // The profile is a Dirichlet field; remove the leftover bisection mismatch
  // (at most opts.target) with a smooth linear ramp rather than a snap, so
  // later re-differentiation sees no kink at the boundary.
  const double leftover = v[M];
  for (int i = 0; i <= M; ++i) {
    v[i] -= leftover * (i * h_of(R2, M) / R2);
    vp[i] -= leftover / R2;
  }
  v[M] = 0.0;
  for (double& x : v)
    if (x > 0.0 && x <= 1e-12) x = 0.0;  // fp dust only

  DomainSpec pspec = spec;
  pspec.mode = DomainMode::Radial;
  pspec.radial_res = M + 1;
  auto dom = std::make_shared<const RadialDomain>(build_radial_domain(pspec));

  OracleEigenpair out;
  out.lambda1 = mid;
  out.profile = make_profile(dom, v);
  out.deriv = std::move(vp);
  out.method = "shooting";
  out.ode_steps = M;
  out.bisection_residual = std::abs(mmid);
  out.monotone_mismatch = monotone;
  return out;
}

// ---------------------------------------------------------------------------
// Comparison-principle probe
// ---------------------------------------------------------------------------

long comparison_principle_probe(std::span<const double> g1, std::span<const double> g2,
                                const DomainSpec& spec, const SolverConfig& config) {
  if (g1.size() != g2.size())
    throw std::invalid_argument("comparison_principle_probe: data sizes differ");
  for (size_t i = 0; i < g1.size(); ++i)
    if (!(g1[i] >= g2[i]) || !(g2[i] >= 0.0))
      throw std::invalid_argument("comparison_principle_probe: requires g1 >= g2 >= 0");

  std::vector<double> psi1, psi2;
  if (spec.mode == DomainMode::FullGrid) {
    auto grid = std::make_shared<const GridDomain>(build_grid_domain(spec));
    FullGridOperator op(grid, config);
    psi1 = op.solve_ma(g1).values;
    psi2 = op.solve_ma(g2).values;
  } else {
    auto dom = std::make_shared<const RadialDomain>(build_radial_domain(spec));
    RadialOperator op(dom, config);
    psi1 = op.solve_ma(g1).values;
    psi2 = op.solve_ma(g2).values;
  }

  double sup2 = 0.0;
  for (double v : psi2) sup2 = std::max(sup2, std::abs(v));
  const double tol = 1e-10 * (1.0 + sup2);
  long violations = 0;
  for (size_t i = 0; i < psi1.size(); ++i)
    if (psi1[i] > psi2[i] + tol) ++violations;
  return violations;
}

}  // namespace cmae
