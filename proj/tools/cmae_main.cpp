// Command-line front end: solve | oracle | open-question, driven by a flat
// key-value config file. Exit codes: 0 converged / success, 1 config or
// usage error, 2 non-convergence at max_iters, 3 monotonicity abort.
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "cmae/io.hpp"
#include "cmae/run_config.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << j.dump(2) << "\n";
}

json summary_common(const cmae::RunConfig& cfg) {
  json j;
  j["mode"] = cfg.domain.mode == cmae::DomainMode::FullGrid ? "full-grid" : "radial";
  j["n"] = cfg.domain.n;
  j["radius"] = cfg.domain.radius;
  return j;
}

template <class Op>
int solve_with(const Op& op, const cmae::RunConfig& cfg, const fs::path& dir, bool quiet) {
  auto u0 = cmae::init_u0(op, cfg.density, cfg.init, cfg.iteration.init_margin);
  cmae::EigenResult<typename Op::Field> res;
  try {
    res = cmae::iterate(op, std::move(u0), cfg.density, cfg.iteration);
  } catch (const cmae::MonotonicityViolation& e) {
    cmae::write_history_csv(dir / "history.csv", e.history());
    std::ofstream diag(dir / "monotonicity_diag.txt");
    diag << e.what() << "\n";
    std::cerr << "cmae solve: " << e.what() << "\n";
    return 3;
  }

  cmae::write_history_csv(dir / "history.csv", res.history);
  cmae::write_field_csv(dir / "eigenfunction.csv", res.eigenfunction);

  json j = summary_common(cfg);
  j["lambda1_est"] = res.lambda1_est;
  j["final_R"] = res.history.back().R;
  j["converged"] = res.converged;
  j["iterations"] = res.iterations_used;
  if (res.lambda1_extrapolated)
    j["lambda1_extrapolated"] = *res.lambda1_extrapolated;
  else
    j["lambda1_extrapolated"] = nullptr;
  write_json(dir / "summary.json", j);

  if (!quiet) {
    std::cout << "lambda1_est = " << cmae::format_g17(res.lambda1_est)
              << (res.converged ? " (converged in " : " (NOT converged after ")
              << res.iterations_used << " iterations)\n";
  }
  return res.converged ? 0 : 2;
}

int cmd_solve(const cmae::RunConfig& cfg, const fs::path& dir, bool quiet) {
  if (cfg.domain.mode == cmae::DomainMode::FullGrid) {
    auto grid = std::make_shared<const cmae::GridDomain>(cmae::build_grid_domain(cfg.domain));
    return solve_with(cmae::FullGridOperator(grid, cfg.solver), cfg, dir, quiet);
  }
  auto dom = std::make_shared<const cmae::RadialDomain>(cmae::build_radial_domain(cfg.domain));
  return solve_with(cmae::RadialOperator(dom, cfg.solver), cfg, dir, quiet);
}

// Quadrature-weighted least-squares scale minimizing ||phi - a * w||_2; the
// eigenfunction is only defined up to a positive ray.
template <class Dom>
double ls_scale(const Dom& dom, const std::vector<double>& phi, const std::vector<double>& w) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < phi.size(); ++i) {
    num += dom.weight[i] * phi[i] * w[i];
    den += dom.weight[i] * w[i] * w[i];
  }
  return num / den;
}

int cmd_oracle(const cmae::RunConfig& cfg, const fs::path& dir, bool quiet) {
  if (!cfg.density.is_radial()) {
    std::cerr << "cmae oracle: no independent oracle exists for non-radial densities; "
                 "such runs are validated only by the residual and invariant checks\n";
    return 1;
  }
  cmae::DomainSpec ospec = cfg.domain;
  ospec.mode = cmae::DomainMode::Radial;
  if (cfg.domain.mode == cmae::DomainMode::FullGrid) ospec.radial_res = 2000;

  cmae::ShootingOptions opts;
  opts.ode_steps = cfg.oracle_ode_steps;
  const auto oracle = cmae::shooting_eigenpair(ospec, cfg.density, opts);
  cmae::write_field_csv(dir / "oracle_profile.csv", oracle.profile);

  json j = summary_common(cfg);
  j["lambda1"] = oracle.lambda1;
  j["method"] = oracle.method;
  j["ode_steps"] = oracle.ode_steps;
  j["bisection_residual"] = oracle.bisection_residual;
  j["monotone_mismatch"] = oracle.monotone_mismatch;
  if (cfg.domain.n == 1 && cfg.density.kind == cmae::DensitySpec::Kind::Constant)
    j["lambda1_bessel"] = cmae::bessel_lambda1(cfg.domain.radius, cfg.density.c);

  if (!cfg.oracle_solve_dir.empty()) {
    const fs::path sdir = cfg.oracle_solve_dir;
    std::ifstream sin(sdir / "summary.json");
    if (!sin) throw std::runtime_error("oracle: cannot read prior solve summary in '" +
                                       sdir.string() + "'");
    const json solve_summary = json::parse(sin);
    const double lam_solve = solve_summary.at("lambda1_est").get<double>();
    j["solve_lambda1_est"] = lam_solve;
    j["rel_lambda_error"] = std::abs(lam_solve - oracle.lambda1) / oracle.lambda1;

    // Sup-norm eigenfunction error after the optimal scaling.
    double scale = 0.0, sup_err = 0.0, sup_ref = 0.0;
    if (cfg.domain.mode == cmae::DomainMode::FullGrid) {
      auto grid = std::make_shared<const cmae::GridDomain>(cmae::build_grid_domain(cfg.domain));
      auto phi = cmae::read_field_csv(sdir / "eigenfunction.csv", grid);
      std::vector<double> w(phi.values.size());
      for (int p = 0; p < grid->num_interior(); ++p) {
        const double xx = grid->x(grid->nodes[p][0]), yy = grid->y(grid->nodes[p][1]);
        w[p] = oracle.eval(xx * xx + yy * yy);
      }
      scale = ls_scale(*grid, phi.values, w);
      for (size_t i = 0; i < w.size(); ++i) {
        sup_err = std::max(sup_err, std::abs(phi.values[i] - scale * w[i]));
        sup_ref = std::max(sup_ref, std::abs(scale * w[i]));
      }
    } else {
      auto dom = std::make_shared<const cmae::RadialDomain>(cmae::build_radial_domain(cfg.domain));
      auto phi = cmae::read_field_csv(sdir / "eigenfunction.csv", dom);
      std::vector<double> w(phi.values.size());
      for (int i = 0; i < dom->num_nodes(); ++i) w[i] = oracle.eval(dom->s[i]);
      scale = ls_scale(*dom, phi.values, w);
      for (size_t i = 0; i < w.size(); ++i) {
        sup_err = std::max(sup_err, std::abs(phi.values[i] - scale * w[i]));
        sup_ref = std::max(sup_ref, std::abs(scale * w[i]));
      }
    }
    j["scale_factor"] = scale;
    j["eigenfunction_sup_error"] = sup_err / sup_ref;
  }

  write_json(dir / "oracle_summary.json", j);
  if (!quiet) std::cout << "lambda1 = " << cmae::format_g17(oracle.lambda1) << "\n";
  return 0;
}

int cmd_open_question(const cmae::RunConfig& cfg, const fs::path& dir, bool quiet) {
  cmae::OpenQuestionReport rep;
  try {
    rep = cmae::open_question_experiment(cfg.domain, cfg.density, cfg.solver, cfg.iteration);
  } catch (const cmae::MonotonicityViolation& e) {
    cmae::write_history_csv(dir / "history.csv", e.history());
    std::ofstream diag(dir / "monotonicity_diag.txt");
    diag << e.what() << "\n";
    std::cerr << "cmae open-question: " << e.what() << "\n";
    return 3;
  }

  cmae::write_openq_csv(dir / "openq.csv", rep, cfg.domain.mode);
  json j = summary_common(cfg);
  j["lambda1_est"] = rep.lambda1_est;
  j["lambda1_oracle"] = rep.lambda1_oracle;
  j["rel_lambda_error"] = rep.rel_lambda_error;
  j["sup_rel_diff"] = rep.sup_rel_diff;
  j["ordering_violations"] = rep.ordering_violations;
  j["ordering_tol"] = rep.ordering_tol;
  j["converged"] = rep.converged;
  j["iterations"] = rep.iterations_used;
  write_json(dir / "openq_summary.json", j);

  if (!quiet) {
    std::cout << "||phi - w||_inf / ||w||_inf = " << cmae::format_g17(rep.sup_rel_diff)
              << ", ordering violations = " << rep.ordering_violations << "\n";
  }
  return rep.converged ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First Dirichlet eigenvalue of the complex Monge-Ampere operator on balls "
               "by inverse iteration"};
  app.require_subcommand(1);

  std::string config_path, out_override;
  bool quiet = false;
  for (auto [name, desc] :
       std::initializer_list<std::pair<const char*, const char*>>{
           {"solve", "Run the inverse iteration and export history and eigenfunction"},
           {"oracle", "Compute the independent ground-truth eigenpair"},
           {"open-question", "Iterate from the ma-of-f start and compare against the "
                             "normalized eigenfunction"}}) {
    auto* cmd = app.add_subcommand(name, desc);
    cmd->add_option("--config", config_path, "Run configuration file")->required();
    cmd->add_option("--out", out_override, "Output directory (overrides output.dir)");
    cmd->add_flag("--quiet", quiet, "Suppress informational output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // usage errors map to exit 1
  }

  try {
    const cmae::RunConfig cfg = cmae::parse_run_config(config_path);
    const fs::path dir = out_override.empty() ? fs::path(cfg.output_dir) : fs::path(out_override);
    fs::create_directories(dir);
    if (app.get_subcommand("solve")->parsed()) return cmd_solve(cfg, dir, quiet);
    if (app.get_subcommand("oracle")->parsed()) return cmd_oracle(cfg, dir, quiet);
    return cmd_open_question(cfg, dir, quiet);
  } catch (const std::exception& e) {
    std::cerr << "cmae: " << e.what() << "\n";
    return 1;
  }
}
