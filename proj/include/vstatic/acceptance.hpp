#pragma once

// The acceptance criteria as code: each criterion turns a set of runs into a
// pass/fail line, and the suite collects every underlying report.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "vstatic/battery.hpp"
#include "vstatic/model.hpp"
#include "vstatic/report.hpp"
#include "vstatic/warp_ode.hpp"

namespace vstatic {

struct CriterionResult {
  CriterionResult(int id_, std::string title_) : id(id_), title(std::move(title_)) {}

  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;   // deterministic
  std::string timing;   // wall-clock notes, kept out of reproducible output
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = kDefaultSeed;
  DerivativePlan plan{};
  double tol_scale = 1.0;
  double kn_sign = 1.0;
  int workers = 0;
  int residual_grid = 200;
  int battery_grid = 100;
  int cotton_grid = 50;
  int sensitivity_grid = 50;
  double runtime_budget = 300.0;
  double model_budget = 30.0;
};

struct AcceptanceResult {
  std::vector<CriterionResult> criteria;
  SuiteSummary summary;

  bool overall_pass() const {
    for (const auto& c : criteria)
      if (!c.pass) return false;
    return summary.overall_pass();
  }
};

namespace detail {

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline BatteryOptions battery_options(const AcceptanceOptions& a, int grid, bool derivative_checks = true) {
  BatteryOptions o;
  o.grid = grid;
  o.tol_scale = a.tol_scale;
  o.seed = a.seed;
  o.plan = a.plan;
  o.kn_sign = a.kn_sign;
  o.derivative_checks = derivative_checks;
  o.workers = a.workers;
  return o;
}

inline const IdentityReport* find_report(const std::vector<IdentityReport>& reports, const std::string& check) {
  for (const auto& r : reports)
    if (r.check_name == check) return &r;
  return nullptr;
}

/// Every named check present in `reports` passes; missing names count as failures if `required`.
inline bool checks_pass(const std::vector<IdentityReport>& reports, const std::vector<std::string>& names,
                        bool required, std::string& why) {
  bool ok = true;
  for (const auto& name : names) {
    const IdentityReport* r = find_report(reports, name);
    if (r == nullptr) {
      if (required) {
        ok = false;
        why += " missing " + name + ";";
      }
      continue;
    }
    if (!r->pass) {
      ok = false;
      why += " " + r->model_name + "/" + name + " max " + fmt("%.3g", r->max_residual) + ";";
    }
  }
  return ok;
}

struct ModelRun {
  MetricModel model;
  BatteryRun run;
  std::vector<IdentityReport> reports;
};

inline ModelRun run_model(MetricModel m, const BatteryOptions& o) {
  ModelRun out{std::move(m), {}, {}};
  out.run = run_battery(out.model, o);
  out.reports = summarize(out.run);
  return out;
}

inline IdentityReport scalar_report(const std::string& model, const ordered_json& params, const std::string& check,
                                    double value, double tol, std::uint64_t seed, const DerivativePlan& plan) {
  Stats s;
  s.add(value);
  return residual_report(model, params, check, s, tol, plan, seed);
}

}  // namespace detail

/// The eleven criteria.
inline AcceptanceResult run_acceptance(const AcceptanceOptions& opt) {
  using detail::fmt;
  using Clock = std::chrono::steady_clock;
  const auto suite_start = Clock::now();
  AcceptanceResult out;
  out.summary.command = "suite";
  auto& reports = out.summary.reports;
  auto add_reports = [&reports](const std::vector<IdentityReport>& rs) {
    reports.insert(reports.end(), rs.begin(), rs.end());
  };
  const double tol = calibrated_tolerance(opt.plan, opt.tol_scale);

  // 1. residual suite on the four basic models
  {
    CriterionResult c{1, "V-static residuals: Euclidean, sphere, hyperbolic, cosh-warped over H2xH2 (200 points)"};
    const auto t0 = Clock::now();
    std::vector<MetricModel> models{euclidean_model(3, 5.0, 2.0), sphere_model(4, 1.0, 1.0),
                                    hyperbolic_model(4, 1.0, 1.0),
                                    cosh_warped_model(5, 1.0, 1.0, fibers::h2xh2())};
    c.pass = true;
    double slowest = 0.0;
    double worst = 0.0;
    for (auto& m : models) {
      auto mr = detail::run_model(m, detail::battery_options(opt, opt.residual_grid, false));
      const IdentityReport* r = detail::find_report(mr.reports, "vstatic_main");
      c.pass = c.pass && r != nullptr && r->pass && r->num_points == opt.residual_grid &&
               mr.run.wall_time < opt.model_budget;
      slowest = std::max(slowest, mr.run.wall_time);
      if (r) worst = std::max(worst, r->max_residual);
      if (r) reports.push_back(*r);
    }
    c.detail = "max residual " + fmt("%.3g", worst) + " < tol " + fmt("%.3g", tol);
    c.timing = "slowest model " + fmt("%.2f", slowest) + " s";
    c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    out.criteria.push_back(c);
  }

  // Full battery over the catalog, shared by criteria 2, 3, 5 and 6.
  const auto t_catalog = Clock::now();
  std::vector<detail::ModelRun> catalog;
  {
    const BatteryOptions o = detail::battery_options(opt, opt.battery_grid);
    std::vector<MetricModel> models{euclidean_model(3, 5.0, 2.0),
                                    sphere_model(3, 1.0, 1.0),
                                    sphere_model(4, 1.0, 1.0),
                                    sphere_model(5, 1.0, 1.0),
                                    hyperbolic_model(3, 1.0, 1.0),
                                    hyperbolic_model(4, 1.0, 1.0),
                                    hyperbolic_model(5, 1.0, 1.0),
                                    cosh_warped_model(3, 1.0, 1.0, fibers::hyperbolic(2)),
                                    cosh_warped_model(4, 1.0, 1.0, fibers::hyperbolic(3)),
                                    cosh_warped_model(5, 1.0, 1.0, fibers::h2xh2()),
                                    hyperbolic_product_static(1, 3),
                                    sphere_product_static(1, 3),
                                    s2xs2_model()};
    for (auto& m : models) {
      catalog.push_back(detail::run_model(std::move(m), o));
      add_reports(catalog.back().reports);
    }
  }
  const double catalog_seconds = std::chrono::duration<double>(Clock::now() - t_catalog).count();
  auto catalog_where = [&catalog](const std::function<bool(const MetricModel&)>& pred) {
    std::vector<const detail::ModelRun*> v;
    for (const auto& mr : catalog)
      if (pred(mr.model)) v.push_back(&mr);
    return v;
  };

  // 2. static-vacuum products
  {
    CriterionResult c{2, "static-vacuum products: kappa = 0 residual, parallel Ricci, |Ric|^2 - R^2/n > 0.1"};
    c.pass = true;
    int seen = 0;
    for (const auto* mr : catalog_where([](const MetricModel& m) { return m.has_tag("static-vacuum"); })) {
      ++seen;
      c.pass = detail::checks_pass(mr->reports, {"vstatic_main", "parallel_ricci", "ricci_excess"}, true, c.detail) &&
               c.pass;
      const IdentityReport* w = detail::find_report(mr->reports, "ricci_excess");
      if (w) c.detail += " " + mr->model.name + " min excess " + fmt("%.4g", w->min_value) + ";";
    }
    c.pass = c.pass && seen == 2;
    out.criteria.push_back(c);
  }

  // 3. identity battery
  {
    CriterionResult c{3, "identity battery: Ricci derivative identity, fC = T + W(grad f), divergence identity, radial Bach integrand, n=3 Bach, Weyl decomposition"};
    c.pass = true;
    int applicable = 0;
    for (const auto& mr : catalog) {
      c.pass = detail::checks_pass(mr.reports, {"weyl_trace_free", "weyl_reconstruction", "first_bianchi"}, true,
                                   c.detail) &&
               c.pass;
      if (!mr.model.is_vstatic_like()) continue;
      ++applicable;
      c.pass = detail::checks_pass(mr.reports, {"lemma1", "lemma2", "divergence_identity"}, true, c.detail) && c.pass;
      if (mr.model.n >= 4) c.pass = detail::checks_pass(mr.reports, {"eq43"}, true, c.detail) && c.pass;
      if (mr.model.n == 3)
        c.pass = detail::checks_pass(mr.reports, {"dim3_div_bach", "dim3_bach_ricci_cotton"}, true, c.detail) &&
                 c.pass;
    }
    bool weyl_witness = false;
    for (const auto* mr : catalog_where([](const MetricModel& m) { return m.has_tag("conformally-curved"); })) {
      const IdentityReport* w = detail::find_report(mr->reports, "weyl_norm");
      const IdentityReport* l2 = detail::find_report(mr->reports, "lemma2");
      if (w && l2) {
        weyl_witness = w->pass && l2->pass;
        c.detail += " " + mr->model.name + "(" + mr->model.parameters.value("fiber", "") + ") min |W| " +
                    fmt("%.3g", w->min_value) + ", fC - T - W(grad f) max " + fmt("%.3g", l2->max_residual) + ";";
      }
    }
    c.pass = c.pass && weyl_witness && applicable > 0;
    c.detail = std::to_string(applicable) + " models;" + c.detail;
    out.criteria.push_back(c);
  }

  // 4. two Cotton routes
  {
    CriterionResult c{4, "two-path Cotton agreement < 1e-4 (n = 5 warped model and a control with C != 0)"};
    const auto t0 = Clock::now();
    const BatteryOptions o = detail::battery_options(opt, opt.cotton_grid);
    auto warped = detail::run_model(cosh_warped_model(5, 1.0, 1.0, fibers::h2xh2()), o);
    auto control = detail::run_model(doubly_warped_control_model(), o);
    std::string why;
    const bool a = detail::checks_pass(warped.reports, {"cotton_two_path"}, true, why);
    const bool b = detail::checks_pass(control.reports, {"cotton_two_path", "cotton_norm"}, true, why);
    const IdentityReport* rw = detail::find_report(warped.reports, "cotton_two_path");
    const IdentityReport* rc = detail::find_report(control.reports, "cotton_two_path");
    const IdentityReport* cn = detail::find_report(control.reports, "cotton_norm");
    c.pass = a && b;
    c.detail = "cosh-warped max " + fmt("%.3g", rw ? rw->max_residual : NAN) + ", control max " +
               fmt("%.3g", rc ? rc->max_residual : NAN) + " with min |C| " + fmt("%.3g", cn ? cn->min_value : NAN) +
               ";" + why;
    for (const auto* r : {rw, rc, cn})
      if (r) reports.push_back(*r);
    c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    out.criteria.push_back(c);
  }

  // 5. Bach
  {
    CriterionResult c{5, "Bach: B = 0 on space forms (n = 3, 4, 5) and S2xS2; B(grad f, grad f) = 0 on vstatic n >= 4"};
    c.pass = true;
    int flat = 0;
    int radial = 0;
    for (const auto& mr : catalog) {
      const std::string& name = mr.model.name;
      if (name == "sphere" || name == "hyperbolic" || name == "s2xs2") {
        ++flat;
        c.pass = detail::checks_pass(mr.reports, {"bach_flat"}, true, c.detail) && c.pass;
      }
      if (mr.model.has_tag("vstatic") && mr.model.n >= 4) {
        ++radial;
        c.pass = detail::checks_pass(mr.reports, {"radial_bach"}, true, c.detail) && c.pass;
      }
    }
    c.pass = c.pass && flat == 7 && radial > 0;
    c.detail = std::to_string(flat) + " Bach-flat models, " + std::to_string(radial) + " radial checks;" + c.detail;
    out.criteria.push_back(c);
  }

  // 6. level sets
  {
    CriterionResult c{6, "level-set probes: umbilic, |grad f| constant, R_1a = 0, R_1abc = 0"};
    c.pass = true;
    int models = 0;
    for (const auto* mr : catalog_where([](const MetricModel& m) { return m.has_tag("vstatic"); })) {
      ++models;
      c.pass = detail::checks_pass(mr->reports,
                                   {"level_set_umbilicity", "level_set_grad_norm_variation", "level_set_mixed_ricci",
                                    "level_set_mixed_riemann"},
                                   true, c.detail) &&
               c.pass;
      c.pass = detail::checks_pass(mr->reports, {"level_set_mean_curvature"}, false, c.detail) && c.pass;
      const IdentityReport* r = detail::find_report(mr->reports, "level_set_umbilicity");
      if (r && r->num_points < opt.battery_grid / 2) {
        c.pass = false;
        c.detail += " " + mr->model.name + " too few regular points;";
      }
    }
    c.pass = c.pass && models > 0;
    c.detail = std::to_string(models) + " vstatic models;" + c.detail;
    out.criteria.push_back(c);
  }

  // 7. ODE closed forms and classification
  const ordered_json ode_params = ordered_json::object();
  auto smooth = [](double R, double r_max, double step = 1e-3) {
    OdeProblem p;
    p.n = 4;
    p.scalar_curvature = R;
    p.lambda = 2.0;
    p.phi0 = 0.0;
    p.dphi0 = 1.0;
    p.span = {0.0, r_max};
    p.step = step;
    return p;
  };
  auto max_error = [](const OdeTrajectory& t, const Profile& exact, double hi) {
    double e = 0.0;
    for (const auto& nd : t.nodes())
      if (nd.r <= hi) e = std::max(e, std::abs(nd.phi - exact(nd.r).value));
    return e;
  };
  OdeProblem generic;
  generic.n = 4;
  generic.scalar_curvature = -5.0;
  generic.lambda = 2.0;
  generic.phi0 = 1.0;
  generic.dphi0 = 0.0;
  generic.span = {-4.0, 4.0};
  generic.r0 = 0.0;
  const OdeProblem p_sphere = smooth(12.0, 4.0);
  const OdeProblem p_flat = smooth(0.0, 10.0);
  const OdeProblem p_hyp = smooth(-12.0, 3.0);
  const OdeTrajectory t_sphere = integrate(p_sphere);
  const OdeTrajectory t_flat = integrate(p_flat);
  const OdeTrajectory t_hyp = integrate(p_hyp);
  const OdeTrajectory t_generic = integrate(generic);
  {
    CriterionResult c{7, "ODE closed forms (sin, r, sinh) and case labels"};
    const auto t0 = Clock::now();
    const double pi = std::numbers::pi;
    const double e_sin = max_error(t_sphere, closed_form(12.0, 4), pi);
    const double e_lin = max_error(t_flat, closed_form(0.0, 4), 10.0);
    const double e_sinh = max_error(t_hyp, closed_form(-12.0, 4), 3.0);
    const auto& z = t_sphere.zero_crossings();
    const double zero_err = z.size() == 2 ? std::abs(z[1] - pi) : INFINITY;
    const bool labels = classify(p_sphere, t_sphere) == CaseLabel::Sphere &&
                        classify(p_flat, t_flat) == CaseLabel::Euclidean &&
                        classify(p_hyp, t_hyp) == CaseLabel::Hyperbolic &&
                        classify(generic, t_generic) == CaseLabel::GenericWarped &&
                        classify_zero_count(12.0, 1) == CaseLabel::Inconsistent &&
                        classify_zero_count(-12.0, 2) == CaseLabel::Inconsistent &&
                        classify_zero_count(0.0, 2) == CaseLabel::Inconsistent;
    const std::vector<IdentityReport> rs{
        detail::scalar_report("ode", ode_params, "closed_form_sin", e_sin, 1e-7, opt.seed, opt.plan),
        detail::scalar_report("ode", ode_params, "closed_form_linear", e_lin, 1e-7, opt.seed, opt.plan),
        detail::scalar_report("ode", ode_params, "closed_form_sinh", e_sinh, 1e-7, opt.seed, opt.plan),
        detail::scalar_report("ode", ode_params, "sphere_zero_at_pi", zero_err, 1e-6, opt.seed, opt.plan)};
    add_reports(rs);
    c.pass = labels;
    for (const auto& r : rs) c.pass = c.pass && r.pass;
    c.detail = "errors sin " + fmt("%.2g", e_sin) + ", r " + fmt("%.2g", e_lin) + ", sinh " + fmt("%.2g", e_sinh) +
               "; |zero - pi| " + fmt("%.2g", zero_err) + "; labels " + (labels ? "as expected" : "WRONG");
    c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    out.criteria.push_back(c);
  }

  // 8. first integral and order
  {
    CriterionResult c{8, "first integral: drift < 1e-9 per unit r, J = 0 on smooth closure, order 4"};
    const auto t0 = Clock::now();
    double drift = 0.0;
    for (const auto* t : {&t_sphere, &t_flat, &t_hyp, &t_generic})
      drift = std::max(drift, t->first_integral_drift() / std::max(1.0, t->range().hi - t->range().lo));
    double j_smooth = 0.0;
    for (const auto* t : {&t_sphere, &t_flat, &t_hyp})
      for (double j : t->first_integral()) j_smooth = std::max(j_smooth, std::abs(j));
    const double e1 = max_error(integrate(smooth(-12.0, 3.0, 0.02)), closed_form(-12.0, 4), 3.0);
    const double e2 = max_error(integrate(smooth(-12.0, 3.0, 0.01)), closed_form(-12.0, 4), 3.0);
    const double order = std::log2(e1 / e2);
    const std::vector<IdentityReport> rs{
        detail::scalar_report("ode", ode_params, "first_integral_drift_per_unit_r", drift, 1e-9, opt.seed, opt.plan),
        detail::scalar_report("ode", ode_params, "first_integral_smooth_closure", j_smooth, 1e-9, opt.seed, opt.plan),
        detail::scalar_report("ode", ode_params, "convergence_order_deviation", order - 4.0, 0.5, opt.seed,
                              opt.plan)};
    add_reports(rs);
    c.pass = true;
    for (const auto& r : rs) c.pass = c.pass && r.pass;
    c.detail = "drift " + fmt("%.2g", drift) + ", max |J| " + fmt("%.2g", j_smooth) + ", order " + fmt("%.3f", order);
    c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    out.criteria.push_back(c);
  }

  // 9. round trip through the geometry
  {
    CriterionResult c{9, "round trip: warped model from the R = 12, n = 4 trajectory has R = 12"};
    const auto t0 = Clock::now();
    const double pi = std::numbers::pi;
    const MetricModel m = generic_warped_model(4, t_sphere, {charts::kPoleMargin, pi - charts::kPoleMargin},
                                               fibers::round_sphere(3), profiles::cos());
    BatteryOptions o = detail::battery_options(opt, opt.battery_grid, false);
    o.tol_scale = 10.0 * opt.tol_scale;
    auto mr = detail::run_model(m, o);
    const IdentityReport* r = detail::find_report(mr.reports, "scalar_curvature");
    c.pass = r != nullptr && r->pass;
    c.detail = "max |R - 12| " + fmt("%.3g", r ? r->max_residual : NAN) + " < 10 tol " + fmt("%.3g", 10.0 * tol);
    if (r) reports.push_back(*r);
    c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    out.criteria.push_back(c);
  }

  // 10. sensitivity
  {
    CriterionResult c{10, "sensitivity: perturbed pair fails by >= 10 tol at a majority of points"};
    const auto t0 = Clock::now();
    auto mr = detail::run_model(perturbed_product_pair(), detail::battery_options(opt, opt.sensitivity_grid));
    c.pass = true;
    for (const char* name : {"vstatic_main", "lemma1", "divergence_identity"}) {
      const int above = mr.run.count_above(name, 10.0 * mr.run.tol);
      const int total = mr.run.evaluated(name);
      const double frac = total ? static_cast<double>(above) / total : 0.0;
      IdentityReport r;
      r.model_name = mr.model.name;
      r.parameters = ordered_json::parse(mr.model.parameters.dump());
      r.check_name = std::string("sensitivity_") + name;
      r.kind = "witness";
      r.num_points = total;
      r.min_value = frac;
      r.threshold = 0.5;
      r.tol = 10.0 * mr.run.tol;
      const IdentityReport* base = detail::find_report(mr.reports, name);
      r.max_residual = base ? base->max_residual : 0.0;
      r.mean_residual = base ? base->mean_residual : 0.0;
      r.pass = frac > 0.5;
      r.plan = opt.plan;
      r.seed = opt.seed;
      r.note = "min_value is the fraction of points above tol";
      c.pass = c.pass && r.pass;
      c.detail += std::string(" ") + name + " " + std::to_string(above) + "/" + std::to_string(total) + ";";
      reports.push_back(r);
    }
    c.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    out.criteria.push_back(c);
  }

  // 11. runtime and determinism
  {
    CriterionResult c{11, "suite under 5 minutes, deterministic under a fixed seed"};
    BatteryOptions o = detail::battery_options(opt, 12);
    o.workers = 1;
    const MetricModel m = cosh_warped_model(5, 1.0, 1.0, fibers::h2xh2());
    SuiteSummary a{"determinism", summarize(run_battery(m, o)), 0.0};
    o.workers = 3;
    SuiteSummary b{"determinism", summarize(run_battery(m, o)), 0.0};
    const bool same = to_json(a, false).dump() == to_json(b, false).dump();
    const double elapsed = std::chrono::duration<double>(Clock::now() - suite_start).count();
    c.pass = same && elapsed < opt.runtime_budget;
    c.detail = std::string("repeat runs ") + (same ? "byte-identical" : "DIFFER") + "; budget " +
               fmt("%.0f", opt.runtime_budget) + " s";
    c.timing = "elapsed " + fmt("%.1f", elapsed) + " s, catalog battery " + fmt("%.1f", catalog_seconds) + " s";
    c.seconds = elapsed;
    out.criteria.push_back(c);
  }

  out.summary.wall_time = std::chrono::duration<double>(Clock::now() - suite_start).count();
  return out;
}

inline std::string criterion_line(const CriterionResult& c) {
  std::string detail = c.detail;
  detail.erase(0, detail.find_first_not_of(' '));
  while (!detail.empty() && (detail.back() == ';' || detail.back() == ' ')) detail.pop_back();
  std::string s = std::string(c.pass ? "PASS" : "FAIL") + " [" + std::to_string(c.id) + "] " + c.title + " -- " + detail;
  if (!c.timing.empty()) s += " (" + c.timing + ")";
  return s;
}

inline ordered_json to_json(const AcceptanceResult& a, bool include_wall_time = true) {
  ordered_json j = to_json(a.summary, include_wall_time);
  j["overall_pass"] = a.overall_pass();
  ordered_json crit = ordered_json::array();
  for (const auto& c : a.criteria) {
    ordered_json e{{"id", c.id}, {"title", c.title}, {"pass", c.pass}, {"detail", c.detail}};
    if (include_wall_time && !c.timing.empty()) e["timing"] = c.timing;
    crit.push_back(std::move(e));
  }
  j["criteria"] = std::move(crit);
  return j;
}

}  // namespace vstatic
