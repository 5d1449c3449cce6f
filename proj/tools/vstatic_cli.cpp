// vstatic: verify identity batteries, integrate warping ODEs, run the acceptance suite.
//
// Exit status: 0 pass, 1 check failure, 2 usage error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vstatic/acceptance.hpp"
#include "vstatic/battery.hpp"
#include "vstatic/model.hpp"
#include "vstatic/report.hpp"
#include "vstatic/warp_ode.hpp"

namespace {

using namespace vstatic;

struct VerifyArgs {
  std::string model;
  ModelParams params;
  int grid = 200;
  double tol_scale = 1.0;
  bool json = false;
};

struct OdeArgs {
  int n = 0;
  double R = 0.0;
  double lambda = 0.0;
  double phi0 = 0.0;
  double dphi0 = 0.0;
  double r_max = 0.0;
  std::optional<double> r_min;
  double step = 1e-3;
};

int cmd_verify(const VerifyArgs& a) {
  const MetricModel model = model_by_name(a.model, a.params);
  BatteryOptions opt;
  opt.grid = a.grid;
  opt.tol_scale = a.tol_scale;
  opt.seed = seed_from_env();
  const BatteryRun run = run_battery(model, opt);
  SuiteSummary s{"verify", summarize(run), run.wall_time};
  if (a.json) {
    std::cout << to_json(s).dump(2) << "\n";
  } else {
    std::printf("model %s %s, %d points, tol %.3g, seed %llu\n", model.name.c_str(), model.parameters.dump().c_str(),
                a.grid, run.tol, static_cast<unsigned long long>(opt.seed));
    for (const auto& r : s.reports) {
      if (r.kind == "witness")
        std::printf("  %s %-30s min %.4g > %.3g\n", r.pass ? "PASS" : "FAIL", r.check_name.c_str(), r.min_value,
                    r.threshold);
      else
        std::printf("  %s %-30s max %.3e < %.3g\n", r.pass ? "PASS" : "FAIL", r.check_name.c_str(), r.max_residual,
                    r.tol);
    }
    std::printf("%s (%.2f s)\n", s.overall_pass() ? "PASS" : "FAIL", s.wall_time);
  }
  return s.overall_pass() ? 0 : 1;
}

OdeProblem ode_problem(const OdeArgs& a) {
  OdeProblem p;
  p.n = a.n;
  p.scalar_curvature = a.R;
  p.lambda = a.lambda;
  p.phi0 = a.phi0;
  p.dphi0 = a.dphi0;
  p.r0 = 0.0;
  p.span = {a.r_min.value_or(0.0), a.r_max};
  p.step = a.step;
  return p;
}

int cmd_ode_solve(const OdeArgs& a) {
  const OdeTrajectory t = integrate(ode_problem(a));
  write_csv(std::cout, t);
  return 0;
}

int cmd_ode_classify(const OdeArgs& a) {
  const OdeProblem p = ode_problem(a);
  const OdeTrajectory t = integrate(p);
  std::string zeros;
  char buf[64];
  for (double z : t.zero_crossings()) {
    std::snprintf(buf, sizeof buf, "%.6f", z == 0.0 ? 0.0 : z);
    zeros += (zeros.empty() ? "" : ",") + std::string(buf);
  }
  std::cout << to_string(classify(p, t)) << " zeros=[" << zeros << "]\n";
  return 0;
}

int cmd_suite(bool json) {
  AcceptanceOptions opt;
  opt.seed = seed_from_env();
  const AcceptanceResult res = run_acceptance(opt);
  if (json) {
    std::cout << to_json(res).dump(2) << "\n";
  } else {
    for (const auto& c : res.criteria) std::cout << criterion_line(c) << "\n";
    std::printf("%s overall (%zu reports, %.1f s)\n", res.overall_pass() ? "PASS" : "FAIL", res.summary.reports.size(),
                res.summary.wall_time);
  }
  return res.overall_pass() ? 0 : 1;
}

void add_ode_options(CLI::App* sub, OdeArgs& a) {
  sub->add_option("--n", a.n, "dimension")->required();
  sub->add_option("--R", a.R, "scalar curvature")->required();
  sub->add_option("--lambda", a.lambda, "fiber Einstein constant")->required();
  sub->add_option("--phi0", a.phi0, "phi at r = 0")->required();
  sub->add_option("--dphi0", a.dphi0, "phi' at r = 0")->required();
  sub->add_option("--r-max", a.r_max, "right end of the span")->required();
  sub->add_option("--r-min", a.r_min, "left end of the span (default 0)");
  sub->add_option("--step", a.step, "RK4 step");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"V-static metric identities and warping ODEs"};
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run the identity battery on a catalog model");
  verify->add_option("--model", va.model, "model name")->required();
  verify->add_option("--n", va.params.n, "dimension");
  verify->add_option("--A", va.params.A, "potential amplitude");
  verify->add_option("--kappa", va.params.kappa, "V-static constant");
  verify->add_option("--p", va.params.p, "product: first factor is H^{p+1} or S^{p+1}");
  verify->add_option("--q", va.params.q, "product: second factor dimension");
  verify->add_option("--fiber", va.params.fiber, "cosh-warped fiber: round, hyperbolic, h2xh2");
  verify->add_option("--grid", va.grid, "number of sample points");
  verify->add_option("--tol-scale", va.tol_scale, "multiplier on the calibrated tolerance");
  verify->add_flag("--json", va.json, "JSON report on stdout");

  OdeArgs oa;
  auto* ode = app.add_subcommand("ode", "warping ODE");
  ode->require_subcommand(1);
  auto* solve = ode->add_subcommand("solve", "print the trajectory as CSV");
  auto* cls = ode->add_subcommand("classify", "print the case label and zeros of phi");
  add_ode_options(solve, oa);
  add_ode_options(cls, oa);

  bool suite_json = false;
  auto* suite = app.add_subcommand("suite", "run every acceptance criterion");
  suite->add_flag("--json", suite_json, "JSON report on stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*verify) return cmd_verify(va);
    if (*solve) return cmd_ode_solve(oa);
    if (*cls) return cmd_ode_classify(oa);
    if (*suite) return cmd_suite(suite_json);
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
