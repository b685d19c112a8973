#include "cmae/eigen_iteration.hpp"

#include <cmath>

namespace cmae {

void IterationConfig::validate() const {
  if (!(tol_R > 0.0) || !(tol_u > 0.0))
    throw std::invalid_argument("IterationConfig: tolerances must be positive");
  if (max_iters < 1) throw std::invalid_argument("IterationConfig: max_iters must be >= 1");
  if (!(tol_mono > 0.0)) throw std::invalid_argument("IterationConfig: tol_mono must be positive");
  if (init_margin < 0.0) throw std::invalid_argument("IterationConfig: init_margin must be >= 0");
}

void check_monotone_product(const std::vector<IterationRecord>& history, double tol_mono) {
  if (history.size() < 2) return;
  const auto& prev = history[history.size() - 2];
  const auto& cur = history.back();
  if (cur.m > prev.m * (1.0 + tol_mono)) {
    throw MonotonicityViolation(
        "iterate: monotone product increased at step " + std::to_string(cur.k) + " (m_" +
            std::to_string(prev.k) + " = " + std::to_string(prev.m) + ", m_" +
            std::to_string(cur.k) + " = " + std::to_string(cur.m) +
            "); this indicates a discretization or solver defect",
        history);
  }
}

namespace {

double scaled_rho_amplitude(int n, const DensitySpec& f, const DomainSpec& spec,
                            double margin) {
  if (margin < 0.0) throw std::invalid_argument("init_u0: margin must be >= 0");
  return (1.0 + margin) * std::pow(f.sup_on(spec), 1.0 / n);
}

}  // namespace

ScalarField2D init_u0(const FullGridOperator& op, const DensitySpec& f, InitStrategy strategy,
                      double margin) {
  const GridDomain& g = op.domain();
  f.validate(g.spec);
  if (strategy == InitStrategy::MaOfF) return op.solve_ma(density_values(g, f));
  const double A = scaled_rho_amplitude(g.spec.n, f, g.spec, margin);
  const double R2 = g.spec.radius * g.spec.radius;
  std::vector<double> vals(g.num_interior());
  for (int p = 0; p < g.num_interior(); ++p) {
    const double xx = g.x(g.nodes[p][0]), yy = g.y(g.nodes[p][1]);
    vals[p] = A * (xx * xx + yy * yy - R2);
  }
  return make_field(op.domain_ptr(), vals);
}

RadialProfile init_u0(const RadialOperator& op, const DensitySpec& f, InitStrategy strategy,
                      double margin) {
  const RadialDomain& d = op.domain();
  f.validate(d.spec);
  if (strategy == InitStrategy::MaOfF) return op.solve_ma(density_values(d, f));
  const double A = scaled_rho_amplitude(d.spec.n, f, d.spec, margin);
  const double R2 = d.spec.radius * d.spec.radius;
  std::vector<double> vals(d.num_nodes());
  for (int i = 0; i < d.num_nodes(); ++i) vals[i] = A * (d.s[i] - R2);
  return make_profile(op.domain_ptr(), vals);
}

namespace {

template <class FieldT, class Dom>
double residual_check_impl(const Dom& dom, const FieldT& u, double lambda,
                           const DensitySpec& f) {
  if (!(lambda > 0.0)) throw std::invalid_argument("residual_check: lambda must be positive");
  const int n = dom.spec.n;
  const auto fv = density_values(dom, f);
  const auto md = ma_density(u);
  const double ln = std::pow(lambda, n);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < u.values.size(); ++i) {
    const double rhs = ln * std::pow(std::max(-u.values[i], 0.0), n) * fv[i];
    num = std::max(num, std::abs(md.values[i] - rhs));
    den = std::max(den, rhs);
  }
  return num / (1.0 + den);
}

}  // namespace

double residual_check(const ScalarField2D& u, double lambda, const DensitySpec& f) {
  return residual_check_impl(*u.grid, u, lambda, f);
}

double residual_check(const RadialProfile& u, double lambda, const DensitySpec& f) {
  return residual_check_impl(*u.dom, u, lambda, f);
}

// ---------------------------------------------------------------------------
// Open-question experiment
// ---------------------------------------------------------------------------

namespace {

OracleEigenpair oracle_for(const DomainSpec& spec, const DensitySpec& f) {
  if (!f.is_radial())
    throw std::invalid_argument(
        "open_question_experiment: no oracle is available for non-radial densities");
  DomainSpec ospec = spec;
  ospec.mode = DomainMode::Radial;
  if (spec.mode == DomainMode::FullGrid) ospec.radial_res = 2000;
  return shooting_eigenpair(ospec, f);
}

template <class Op>
OpenQuestionReport run_experiment(const Op& op, const DomainSpec& spec, const DensitySpec& f,
                                  const IterationConfig& iter_cfg) {
  auto u0 = init_u0(op, f, InitStrategy::MaOfF);
  auto res = iterate(op, std::move(u0), f, iter_cfg);
  const OracleEigenpair oracle = oracle_for(spec, f);

  OpenQuestionReport rep;
  rep.lambda1_est = res.lambda1_est;
  rep.lambda1_oracle = oracle.lambda1;
  rep.rel_lambda_error = std::abs(res.lambda1_est - oracle.lambda1) / oracle.lambda1;
  rep.converged = res.converged;
  rep.iterations_used = res.iterations_used;

  // w is the oracle eigenfunction with the normalization ||w||_inf = 1/lambda.
  const auto& phi = res.eigenfunction.values;
  rep.phi = phi;
  rep.w.resize(phi.size());
  rep.coords.resize(phi.size());
  if constexpr (std::is_same_v<Op, FullGridOperator>) {
    const GridDomain& g = op.domain();
    for (size_t p = 0; p < phi.size(); ++p) {
      const double xx = g.x(g.nodes[p][0]), yy = g.y(g.nodes[p][1]);
      rep.coords[p] = {xx, yy};
      rep.w[p] = oracle.eval(xx * xx + yy * yy) / oracle.lambda1;
    }
  } else {
    const RadialDomain& d = op.domain();
    for (size_t i = 0; i < phi.size(); ++i) {
      rep.coords[i] = {d.s[i], 0.0};
      rep.w[i] = oracle.eval(d.s[i]) / oracle.lambda1;
    }
  }

  double sup_w = 0.0, sup_diff = 0.0;
  for (size_t i = 0; i < phi.size(); ++i) {
    sup_w = std::max(sup_w, std::abs(rep.w[i]));
    sup_diff = std::max(sup_diff, std::abs(phi[i] - rep.w[i]));
  }
  rep.sup_rel_diff = sup_diff / sup_w;
  rep.ordering_tol = kOrderingTolFrac * sup_w;
  rep.ordering_violations = 0;
  for (size_t i = 0; i < phi.size(); ++i)
    if (phi[i] > rep.w[i] + rep.ordering_tol) ++rep.ordering_violations;
  return rep;
}

}  // namespace

OpenQuestionReport open_question_experiment(const DomainSpec& spec, const DensitySpec& f,
                                            const SolverConfig& solver_cfg,
                                            const IterationConfig& iter_cfg) {
  spec.validate();
  f.validate(spec);
  if (spec.mode == DomainMode::FullGrid) {
    auto grid = std::make_shared<const GridDomain>(build_grid_domain(spec));
    FullGridOperator op(grid, solver_cfg);
    return run_experiment(op, spec, f, iter_cfg);
  }
  auto dom = std::make_shared<const RadialDomain>(build_radial_domain(spec));
  RadialOperator op(dom, solver_cfg);
  return run_experiment(op, spec, f, iter_cfg);
}

}  // namespace cmae
