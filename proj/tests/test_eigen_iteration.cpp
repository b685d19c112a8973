#include <doctest.h>

#include <cmath>

#include "cmae/eigen_iteration.hpp"

using namespace cmae;

namespace {

DomainSpec radial_spec(int n, double radius, int res) {
  DomainSpec s;
  s.n = n;
  s.radius = radius;
  s.mode = DomainMode::Radial;
  s.radial_res = res;
  return s;
}

DomainSpec grid_spec(double radius, int res) {
  DomainSpec s;
  s.n = 1;
  s.radius = radius;
  s.mode = DomainMode::FullGrid;
  s.grid_res = res;
  return s;
}

std::shared_ptr<const RadialDomain> radial_dom(int n, int res, double radius = 1.0) {
  return std::make_shared<const RadialDomain>(build_radial_domain(radial_spec(n, radius, res)));
}

std::shared_ptr<const GridDomain> grid_dom(int res, double radius = 1.0) {
  return std::make_shared<const GridDomain>(build_grid_domain(grid_spec(radius, res)));
}

constexpr double kLambdaDisk = 1.4457964907366961;  // j01^2/4, mpmath

}  // namespace

TEST_CASE("init_u0: scaled rho and ma-of-f") {
  const auto f1 = DensitySpec::constant(1.0);
  const auto f4 = DensitySpec::constant(4.0);

  {
    auto dom = radial_dom(1, 128);
    RadialOperator op(dom, SolverConfig{});
    // margin 0, f = 1: u0 = rho exactly.
    const auto u0 = init_u0(op, f1, InitStrategy::ScaledRho, 0.0);
    for (int i = 0; i < dom->num_nodes(); ++i)
      CHECK(u0.values[i] == doctest::Approx(dom->s[i] - 1.0).epsilon(1e-15));
    // margin 0, f = 4 (n = 1): amplitude 4.
    const auto u4 = init_u0(op, f4, InitStrategy::ScaledRho, 0.0);
    for (int i = 0; i < dom->num_nodes(); ++i)
      CHECK(u4.values[i] == doctest::Approx(4.0 * (dom->s[i] - 1.0)).epsilon(1e-15));
    // ma-of-f, f = 1: solves (dd^c u)^1 = dV, i.e. u = |z|^2 - 1; the radial
    // inversion is exact for constant data.
    const auto um = init_u0(op, f1, InitStrategy::MaOfF);
    for (int i = 0; i < dom->num_nodes(); ++i)
      CHECK(um.values[i] == doctest::Approx(dom->s[i] - 1.0).epsilon(1e-12));
    CHECK_THROWS_AS(init_u0(op, f1, InitStrategy::ScaledRho, -0.5), std::invalid_argument);
  }
  {
    auto grid = grid_dom(65);
    FullGridOperator op(grid, SolverConfig{});
    const auto um = init_u0(op, f1, InitStrategy::MaOfF);
    double dev = 0.0;
    for (int p = 0; p < grid->num_interior(); ++p) {
      const double xx = grid->x(grid->nodes[p][0]), yy = grid->y(grid->nodes[p][1]);
      dev = std::max(dev, std::abs(um.values[p] - (xx * xx + yy * yy - 1.0)));
    }
    CHECK(dev <= 5e-3);
  }
}

TEST_CASE("iterate: disk eigenvalue in radial mode") {
  const auto f1 = DensitySpec::constant(1.0);
  auto dom = radial_dom(1, 1024);
  RadialOperator op(dom, SolverConfig{});
  IterationConfig cfg;

  auto res = iterate(op, init_u0(op, f1, InitStrategy::ScaledRho), f1, cfg);
  CHECK(res.converged);
  CHECK(res.lambda1_est == doctest::Approx(kLambdaDisk).epsilon(5e-4));
  CHECK(res.history.front().residual == 0.0);
  CHECK(res.history.size() == static_cast<size_t>(res.iterations_used + 1));

  // Monotone product and the Rayleigh floor (n = 1: R -> lambda).
  for (size_t k = 1; k < res.history.size(); ++k) {
    CHECK(res.history[k].m <= res.history[k - 1].m * (1.0 + kTolMono));
    CHECK(res.history[k].R >= kLambdaDisk * (1.0 - 0.02));
  }

  // The converged pair satisfies the eigen-equation.
  CHECK(residual_check(res.eigenfunction, res.lambda1_est, f1) <= 1e-4);

  // Aitken extrapolation is present and at least as close.
  REQUIRE(res.lambda1_extrapolated.has_value());
  CHECK(std::abs(*res.lambda1_extrapolated - kLambdaDisk) <= 5e-4);
}

TEST_CASE("iterate: determinism") {
  const auto f1 = DensitySpec::constant(1.0);
  auto dom = radial_dom(2, 256);
  RadialOperator op(dom, SolverConfig{});
  IterationConfig cfg;
  auto r1 = iterate(op, init_u0(op, f1, InitStrategy::ScaledRho), f1, cfg);
  auto r2 = iterate(op, init_u0(op, f1, InitStrategy::ScaledRho), f1, cfg);
  REQUIRE(r1.history.size() == r2.history.size());
  for (size_t k = 0; k < r1.history.size(); ++k) {
    CHECK(r1.history[k].R == r2.history[k].R);
    CHECK(r1.history[k].sup_norm == r2.history[k].sup_norm);
    CHECK(r1.history[k].norm_mu == r2.history[k].norm_mu);
    CHECK(r1.history[k].m == r2.history[k].m);
    CHECK(r1.history[k].residual == r2.history[k].residual);
  }
  for (size_t i = 0; i < r1.eigenfunction.values.size(); ++i)
    CHECK(r1.eigenfunction.values[i] == r2.eigenfunction.values[i]);
}

TEST_CASE("iterate: stopping, degenerate input, max_iters") {
  const auto f1 = DensitySpec::constant(1.0);
  auto dom = radial_dom(1, 128);
  RadialOperator op(dom, SolverConfig{});

  IterationConfig one;
  one.max_iters = 1;
  auto res = iterate(op, init_u0(op, f1, InitStrategy::ScaledRho), f1, one);
  CHECK_FALSE(res.converged);
  CHECK(res.iterations_used == 1);
  CHECK(res.history.size() == 2);  // k = 0 and k = 1

  auto zero = init_u0(op, f1, InitStrategy::ScaledRho);
  for (double& v : zero.values) v = 0.0;
  CHECK_THROWS_AS(iterate(op, zero, f1, IterationConfig{}), std::invalid_argument);

  IterationConfig bad;
  bad.tol_R = -1.0;
  CHECK_THROWS_AS(iterate(op, init_u0(op, f1, InitStrategy::ScaledRho), f1, bad),
                  std::invalid_argument);
}

TEST_CASE("iterate: observer sees every step") {
  const auto f1 = DensitySpec::constant(1.0);
  auto dom = radial_dom(1, 128);
  RadialOperator op(dom, SolverConfig{});
  IterationConfig cfg;
  cfg.max_iters = 5;
  int calls = 0;
  StepObserver<RadialProfile> obs = [&](int k, const RadialProfile& u, const IterationRecord& r) {
    CHECK(k == r.k);
    CHECK(sup_abs(u) == r.sup_norm);
    ++calls;
  };
  auto res = iterate(op, init_u0(op, f1, InitStrategy::ScaledRho), f1, cfg, obs);
  CHECK(calls == static_cast<int>(res.history.size()));
}

TEST_CASE("iterate: normalize-each-step variant reaches the same eigenvalue") {
  const auto f1 = DensitySpec::constant(1.0);
  auto dom = radial_dom(2, 512);
  RadialOperator op(dom, SolverConfig{});
  IterationConfig plain, normalized;
  normalized.normalize_each_step = true;
  auto r1 = iterate(op, init_u0(op, f1, InitStrategy::ScaledRho), f1, plain);
  auto r2 = iterate(op, init_u0(op, f1, InitStrategy::ScaledRho), f1, normalized);
  CHECK(r1.lambda1_est == doctest::Approx(r2.lambda1_est).epsilon(1e-6));
  CHECK(sup_abs(r2.eigenfunction) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("monotone product guard") {
  std::vector<IterationRecord> hist;
  IterationRecord a;
  a.k = 0;
  a.m = 1.0;
  hist.push_back(a);
  IterationRecord b;
  b.k = 1;
  b.m = 0.9;
  hist.push_back(b);
  CHECK_NOTHROW(check_monotone_product(hist, kTolMono));
  hist.back().m = 1.0 + 1e-9;  // within the tolerance band
  CHECK_NOTHROW(check_monotone_product(hist, kTolMono));
  hist.back().m = 1.0 + 1e-6;  // beyond it
  CHECK_THROWS_AS(check_monotone_product(hist, kTolMono), MonotonicityViolation);
  try {
    check_monotone_product(hist, kTolMono);
  } catch (const MonotonicityViolation& e) {
    CHECK(e.history().size() == 2);
  }
}

TEST_CASE("residual_check") {
  const auto f1 = DensitySpec::constant(1.0);
  auto dom = radial_dom(1, 512);

  std::vector<double> zeros(dom->num_nodes(), 0.0);
  const auto zero = make_profile(dom, zeros);
  CHECK(residual_check(zero, 1.0, f1) == 0.0);
  CHECK_THROWS_AS(residual_check(zero, -1.0, f1), std::invalid_argument);

  // The oracle eigenpair satisfies the equation at the discretization order.
  double r512, r1024;
  {
    const auto pair = shooting_eigenpair(radial_spec(1, 1.0, 512), DensitySpec::constant(1.0));
    std::vector<double> vals(dom->num_nodes());
    for (int i = 0; i < dom->num_nodes(); ++i)
      vals[i] = std::min(pair.eval(dom->s[i]), 0.0);
    vals.back() = 0.0;
    r512 = residual_check(make_profile(dom, vals), pair.lambda1, f1);
    CHECK(r512 <= 1e-4);
  }
  {
    auto dom2 = radial_dom(1, 1024);
    const auto pair = shooting_eigenpair(radial_spec(1, 1.0, 1024), DensitySpec::constant(1.0));
    std::vector<double> vals(dom2->num_nodes());
    for (int i = 0; i < dom2->num_nodes(); ++i)
      vals[i] = std::min(pair.eval(dom2->s[i]), 0.0);
    vals.back() = 0.0;
    r1024 = residual_check(make_profile(dom2, vals), pair.lambda1, f1);
  }
  CHECK(r1024 <= 0.35 * r512);  // second-order decay
}

TEST_CASE("open question experiment: radial disk") {
  const auto f1 = DensitySpec::constant(1.0);
  const auto f4 = DensitySpec::constant(4.0);
  const SolverConfig scfg;
  IterationConfig icfg;

  const auto rep = open_question_experiment(radial_spec(1, 1.0, 512), f1, scfg, icfg);
  CHECK(rep.converged);
  CHECK(rep.rel_lambda_error <= 0.01);
  CHECK(rep.ordering_violations == 0);
  CHECK(rep.phi.size() == 512);
  CHECK(rep.w.size() == 512);
  CHECK(rep.sup_rel_diff >= 0.0);

  // Scaling f by c rescales phi and w identically for n = 1, leaving the
  // reported ratio invariant.
  const auto rep4 = open_question_experiment(radial_spec(1, 1.0, 512), f4, scfg, icfg);
  CHECK(rep4.sup_rel_diff == doctest::Approx(rep.sup_rel_diff).epsilon(1e-9));

  // Below-minimum resolution is rejected.
  CHECK_THROWS_AS(open_question_experiment(radial_spec(1, 1.0, 32), f1, scfg, icfg),
                  std::invalid_argument);
  // Non-radial density has no oracle.
  const auto bump = DensitySpec::gaussian_bump(1.0, 1.0, 0.2, 0.0, 0.3);
  CHECK_THROWS_AS(open_question_experiment(grid_spec(1.0, 65), bump, scfg, icfg),
                  std::invalid_argument);
}

TEST_CASE("iterate: agrees with the shooting oracle across n, radius and density") {
  struct Case {
    int n;
    double radius;
    DensitySpec f;
  };
  const std::vector<Case> cases = {
      {1, 0.5, DensitySpec::constant(2.0)},
      {2, 2.0, DensitySpec::constant(1.0)},
      {2, 1.0, DensitySpec::radial_poly({1.0, 0.5})},
      {3, 1.0, DensitySpec::constant(1.0)},
  };
  for (const auto& c : cases) {
    CAPTURE(c.n);
    CAPTURE(c.radius);
    auto dom = std::make_shared<const RadialDomain>(
        build_radial_domain(radial_spec(c.n, c.radius, 512)));
    RadialOperator op(dom, SolverConfig{});
    auto res = iterate(op, init_u0(op, c.f, InitStrategy::ScaledRho), c.f, IterationConfig{});
    const auto pair = shooting_eigenpair(radial_spec(c.n, c.radius, 512), c.f);
    CHECK(res.converged);
    CHECK(res.lambda1_est == doctest::Approx(pair.lambda1).epsilon(1e-3));
    CHECK(residual_check(res.eigenfunction, res.lambda1_est, c.f) <= 1e-3);
    for (size_t k = 1; k < res.history.size(); ++k)
      CHECK(res.history[k].m <= res.history[k - 1].m * (1.0 + kTolMono));
  }

  // Rescaling the ball: lambda scales as 1/radius^2 for every n.
  const auto f1 = DensitySpec::constant(1.0);
  const auto a = shooting_eigenpair(radial_spec(2, 1.0, 256), f1);
  const auto b = shooting_eigenpair(radial_spec(2, 2.0, 256), f1);
  CHECK(b.lambda1 == doctest::Approx(a.lambda1 / 4.0).epsilon(1e-8));
}

TEST_CASE("iterate: full-grid disk at modest resolution") {
  const auto f1 = DensitySpec::constant(1.0);
  auto grid = grid_dom(65);
  FullGridOperator op(grid, SolverConfig{});
  IterationConfig cfg;
  auto res = iterate(op, init_u0(op, f1, InitStrategy::ScaledRho), f1, cfg);
  CHECK(res.converged);
  CHECK(res.lambda1_est == doctest::Approx(kLambdaDisk).epsilon(0.02));
  for (size_t k = 1; k < res.history.size(); ++k)
    CHECK(res.history[k].m <= res.history[k - 1].m * (1.0 + kTolMono));
  CHECK(residual_check(res.eigenfunction, res.lambda1_est, f1) <= 1e-2);
}

TEST_CASE("iterate: gaussian bump density (no oracle, invariants only)") {
  const auto bump = DensitySpec::gaussian_bump(1.0, 0.5, 0.3, -0.1, 0.5);
  auto grid = grid_dom(65);
  FullGridOperator op(grid, SolverConfig{});
  IterationConfig cfg;
  auto res = iterate(op, init_u0(op, bump, InitStrategy::ScaledRho), bump, cfg);
  CHECK(res.converged);
  for (size_t k = 1; k < res.history.size(); ++k)
    CHECK(res.history[k].m <= res.history[k - 1].m * (1.0 + kTolMono));
  CHECK(residual_check(res.eigenfunction, res.lambda1_est, bump) <= 1e-2);
}
