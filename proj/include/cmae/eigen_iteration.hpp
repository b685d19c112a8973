// Inverse-iteration driver: initialization, the fixed-point loop
// u_{k+1} = T(u_k), stopping, diagnostics and lambda_1 extraction.
#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>

#include "cmae/dirichlet_solver.hpp"
#include "cmae/oracles.hpp"
#include "cmae/pluripotential.hpp"

namespace cmae {

// Relative slack on the monotone product R(u_k) ||u_k||^n; the continuum
// quantity is nonincreasing (a Lyapunov function of the scheme), so a
// violation beyond discretization roundoff signals a solver defect.
inline constexpr double kTolMono = 1e-8;

// Ordering checks against the oracle eigenfunction compare two different
// discretizations; 1% of the eigenfunction scale covers their O(h^2)
// cross errors while still catching genuine ordering failures.
inline constexpr double kOrderingTolFrac = 1e-2;

struct IterationConfig {
  double tol_R = 1e-6;
  double tol_u = 1e-6;
  int max_iters = 200;
  double tol_mono = kTolMono;
  bool normalize_each_step = false;  // rescale iterates to sup-norm 1
  double init_margin = 0.01;         // scaled-rho headroom

  void validate() const;
};

struct IterationRecord {
  int k = 0;
  double R = 0.0;           // Rayleigh quotient of u_k
  double lambda_est = 0.0;  // R^{1/n}
  double sup_norm = 0.0;
  double norm_mu = 0.0;     // ||u_k||_{L^{n+1}(mu)}
  double m = 0.0;           // monotone product R ||u_k||^n (descaled if normalizing)
  double residual = 0.0;    // ||ma(u_k) - R_{k-1} (-u_{k-1})^n f||_inf, 0 at k = 0
  double wall_time_s = 0.0;
};

class MonotonicityViolation : public std::runtime_error {
 public:
  MonotonicityViolation(const std::string& msg, std::vector<IterationRecord> hist)
      : std::runtime_error(msg), history_(std::move(hist)) {}
  const std::vector<IterationRecord>& history() const { return history_; }

 private:
  std::vector<IterationRecord> history_;
};

template <class FieldT>
struct EigenResult {
  double lambda1_est = 0.0;
  FieldT eigenfunction;
  std::vector<IterationRecord> history;
  bool converged = false;
  int iterations_used = 0;
  // Aitken extrapolation of the R_k sequence, advisory only.
  std::optional<double> lambda1_extrapolated;
};

enum class InitStrategy { ScaledRho, MaOfF };

// Scaled-rho: A rho with A = (1 + margin) (sup f)^{1/n}, which satisfies
// (dd^c u0)^n = A^n dV >= f dV. Ma-of-f: the solution of (dd^c u0)^n = f dV.
ScalarField2D init_u0(const FullGridOperator& op, const DensitySpec& f,
                      InitStrategy strategy, double margin = 0.01);
RadialProfile init_u0(const RadialOperator& op, const DensitySpec& f,
                      InitStrategy strategy, double margin = 0.01);

// Normalized eigen-equation residual
// ||ma(u) - lambda^n (-u)^n f||_inf / (1 + lambda^n ||(-u)^n f||_inf).
double residual_check(const ScalarField2D& u, double lambda, const DensitySpec& f);
double residual_check(const RadialProfile& u, double lambda, const DensitySpec& f);

template <class FieldT>
using StepObserver = std::function<void(int k, const FieldT& u, const IterationRecord&)>;

// The loop u_{k+1} = T(u_k). Stops once both the relative Rayleigh change
// and the relative sup-norm step fall below their tolerances, or at
// max_iters (converged = false). Aborts with MonotonicityViolation if the
// monotone product increases beyond tol_mono.
template <class Op>
EigenResult<typename Op::Field> iterate(
    const Op& op, typename Op::Field u0, const DensitySpec& f, const IterationConfig& cfg,
    const StepObserver<typename Op::Field>& observer = {});

// ---------------------------------------------------------------------------
// Section 4.2-style experiment: iterate from the ma-of-f initialization and
// compare the limit phi against the oracle eigenfunction w normalized by
// ||w||_inf = 1/lambda_1. Reports measured numbers only.
// ---------------------------------------------------------------------------

struct OpenQuestionReport {
  double lambda1_est = 0.0;
  double lambda1_oracle = 0.0;
  double rel_lambda_error = 0.0;
  double sup_rel_diff = 0.0;      // ||phi - w||_inf / ||w||_inf
  long ordering_violations = 0;   // nodes with phi > w + ordering_tol
  double ordering_tol = 0.0;
  bool converged = false;
  int iterations_used = 0;
  std::vector<std::array<double, 2>> coords;  // (x, y) or (s, 0) per node
  std::vector<double> phi;
  std::vector<double> w;
};

OpenQuestionReport open_question_experiment(const DomainSpec& spec, const DensitySpec& f,
                                            const SolverConfig& solver_cfg,
                                            const IterationConfig& iter_cfg);

// ---------------------------------------------------------------------------
// Template implementation
// ---------------------------------------------------------------------------

void check_monotone_product(const std::vector<IterationRecord>& history, double tol_mono);

template <class Op>
EigenResult<typename Op::Field> iterate(const Op& op, typename Op::Field u0,
                                        const DensitySpec& f, const IterationConfig& cfg,
                                        const StepObserver<typename Op::Field>& observer) {
  using FieldT = typename Op::Field;
  using clock = std::chrono::steady_clock;
  cfg.validate();

  const int n = op.domain().spec.n;
  const auto f_nodes = density_values(op.domain(), f);
  if (sup_abs(u0) <= kTolZero)
    throw std::invalid_argument("iterate: initial field is degenerate (sup below tolerance)");

  EigenResult<FieldT> result;
  FieldT u = std::move(u0);
  double scale_cum = 1.0;  // product of per-step normalizations

  double R = rayleigh(u, f);
  double nm = norm_lnp1_mu(u, f);
  result.history.push_back(IterationRecord{0, R, std::pow(R, 1.0 / n), sup_abs(u), nm,
                                           R * std::pow(nm * scale_cum, n), 0.0, 0.0});
  if (observer) observer(0, u, result.history.back());

  for (int k = 1; k <= cfg.max_iters; ++k) {
    const auto t0 = clock::now();

    std::vector<double> g(u.values.size());
    for (size_t i = 0; i < g.size(); ++i)
      g[i] = R * std::pow(std::max(-u.values[i], 0.0), n) * f_nodes[i];
    FieldT u_next = op.solve_ma(g);

    // Residual of the step equation, before any renormalization.
    const auto md = ma_density(u_next);
    double resid = 0.0;
    for (size_t i = 0; i < g.size(); ++i)
      resid = std::max(resid, std::abs(md.values[i] - g[i]));

    if (cfg.normalize_each_step) {
      const double scale = sup_abs(u_next);
      if (scale <= kTolZero) throw std::runtime_error("iterate: degenerate iterate");
      for (double& v : u_next.values) v /= scale;
      scale_cum *= scale;
    }

    const double R_next = rayleigh(u_next, f);
    const double nm_next = norm_lnp1_mu(u_next, f);
    double step = 0.0;
    for (size_t i = 0; i < u.values.size(); ++i)
      step = std::max(step, std::abs(u_next.values[i] - u.values[i]));
    const double sup_prev = sup_abs(u);

    const double wall = std::chrono::duration<double>(clock::now() - t0).count();
    result.history.push_back(IterationRecord{k, R_next, std::pow(R_next, 1.0 / n),
                                             sup_abs(u_next), nm_next,
                                             R_next * std::pow(nm_next * scale_cum, n), resid,
                                             wall});
    check_monotone_product(result.history, cfg.tol_mono);
    if (observer) observer(k, u_next, result.history.back());

    const double dR = std::abs(R_next - R) / R;
    const double du = step / sup_prev;
    u = std::move(u_next);
    R = R_next;
    result.iterations_used = k;
    if (dR <= cfg.tol_R && du <= cfg.tol_u) {
      result.converged = true;
      break;
    }
  }

  result.lambda1_est = std::pow(R, 1.0 / n);
  result.eigenfunction = std::move(u);

  // Aitken delta-squared on the last three Rayleigh quotients.
  const auto& h = result.history;
  if (h.size() >= 3) {
    const double r0 = h[h.size() - 3].R, r1 = h[h.size() - 2].R, r2 = h[h.size() - 1].R;
    const double den = r2 - 2.0 * r1 + r0;
    if (std::abs(den) > 1e-300) {
      const double rx = r2 - (r2 - r1) * (r2 - r1) / den;
      if (rx > 0.0) result.lambda1_extrapolated = std::pow(rx, 1.0 / n);
    }
  }
  return result;
}

}  // namespace cmae
