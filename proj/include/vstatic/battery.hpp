#pragma once

// The identity battery: every check that applies to a model, evaluated at
// quasi-random interior points and reduced to one IdentityReport per check.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "vstatic/curvature.hpp"
#include "vstatic/model.hpp"
#include "vstatic/report.hpp"
#include "vstatic/sampling.hpp"
#include "vstatic/vstatic.hpp"

namespace vstatic {

inline constexpr double kWitnessThreshold = 0.1;
inline constexpr double kCottonRelativeTol = 1e-4;

struct BatteryOptions {
  int grid = 200;
  double tol_scale = 1.0;
  std::uint64_t seed = kDefaultSeed;
  DerivativePlan plan{};
  // Sign of the Kulkarni-Nomizu term when W is rebuilt from A; -1 breaks the decomposition.
  double kn_sign = 1.0;
  // false: only checks needing no differentiated curvature.
  bool derivative_checks = true;
  // 0: one per hardware thread.
  int workers = 0;
};

struct CheckSpec {
  std::string name;
  bool witness = false;
  double bound = 0.0;  // tol for residuals, threshold for witnesses
};

/// Per-point values of every check, indexed [point][check].
struct BatteryRun {
  const MetricModel* model = nullptr;
  BatteryOptions options;
  double tol = 0.0;
  std::vector<CheckSpec> checks;
  std::vector<Point> points;
  std::vector<std::vector<std::optional<double>>> values;
  double wall_time = 0.0;

  int index_of(const std::string& name) const {
    for (std::size_t i = 0; i < checks.size(); ++i)
      if (checks[i].name == name) return static_cast<int>(i);
    return -1;
  }

  /// Points where `name` was evaluated and exceeded `bound` in magnitude.
  int count_above(const std::string& name, double bound) const {
    const int k = index_of(name);
    require(k >= 0, "no check named '" + name + "'");
    int c = 0;
    for (const auto& row : values)
      if (row[static_cast<std::size_t>(k)] && std::abs(*row[static_cast<std::size_t>(k)]) > bound) ++c;
    return c;
  }

  int evaluated(const std::string& name) const {
    const int k = index_of(name);
    require(k >= 0, "no check named '" + name + "'");
    int c = 0;
    for (const auto& row : values)
      if (row[static_cast<std::size_t>(k)]) ++c;
    return c;
  }
};

/// Checks that apply to `model`, in report order.
inline std::vector<CheckSpec> battery_checks(const MetricModel& model, const BatteryOptions& opt, double tol) {
  const int n = model.n;
  // Perturbed pairs run the identity checks so their failures show.
  const bool vlike = model.is_vstatic_like() || model.has_tag("perturbed");
  const bool vstatic = model.has_tag("vstatic");
  const bool einstein = model.has_tag("einstein");
  const bool parallel = einstein || model.has_tag("parallel-ricci");
  std::vector<CheckSpec> c;
  auto residual = [&](const std::string& name) { c.push_back({name, false, tol}); };
  auto witness = [&](const std::string& name) { c.push_back({name, true, kWitnessThreshold}); };

  if (vlike) {
    residual("vstatic_main");
    residual("vstatic_trace");
    residual("vstatic_traceless");
    residual("vstatic_form_consistency");
  }
  residual("first_bianchi");
  residual("weyl_trace_free");
  residual("weyl_reconstruction");
  if (model.expected_scalar_curvature) residual("scalar_curvature");
  if (einstein) residual("einstein");
  if (model.has_tag("conformally-curved")) witness("weyl_norm");
  if (model.has_tag("static-vacuum") && !einstein) witness("ricci_excess");
  if (vstatic) residual("t_tensor");

  if (opt.derivative_checks) {
    residual("metric_compatibility");
    residual("second_bianchi");
    if (parallel) residual("parallel_ricci");
    if (parallel && model.kappa != 0.0) residual("parallel_ricci_obstruction");
    if (n >= 4) c.push_back({"cotton_two_path", false, kCottonRelativeTol});
    if (model.has_tag("control")) witness("cotton_norm");
    if (n == 3) residual("bach3_divergence");
    if (einstein) residual("bach_flat");
    if (vlike) {
      residual("lemma1");
      residual("lemma2");
      residual("divergence_identity");
      if (n >= 4) residual("eq43");
      if (n >= 4 && vstatic) residual("radial_bach");
      if (n == 3) {
        residual("dim3_div_bach");
        residual("dim3_bach_ricci_cotton");
      }
    }
  }

  if (vstatic) {
    residual("level_set_umbilicity");
    residual("level_set_grad_norm_variation");
    residual("level_set_mixed_ricci");
    residual("level_set_mixed_riemann");
    if (model.warping) residual("level_set_mean_curvature");
  }
  return c;
}

namespace detail {

class PointRow {
 public:
  PointRow(const std::vector<CheckSpec>& checks, std::vector<std::optional<double>>& row)
      : checks_(checks), row_(row) {
    row_.assign(checks.size(), std::nullopt);
  }
  bool wants(const char* name) const { return find(name) >= 0; }
  void set(const char* name, double v) {
    const int k = find(name);
    if (k >= 0) row_[static_cast<std::size_t>(k)] = v;
  }

 private:
  int find(const char* name) const {
    for (std::size_t i = 0; i < checks_.size(); ++i)
      if (checks_[i].name == name) return static_cast<int>(i);
    return -1;
  }
  const std::vector<CheckSpec>& checks_;
  std::vector<std::optional<double>>& row_;
};

inline void evaluate_point(const MetricModel& model, const Point& p, const BatteryOptions& opt, PointRow& row) {
  const int n = model.n;
  const PointContext c(model, p, opt.plan);
  const auto& lc = c.local();
  const MetricAtPoint& m = c.metric();
  const CurvatureEngine& eng = c.engine();

  if (row.wants("vstatic_main")) {
    const VStaticResidualSet r = vstatic_residuals(c);
    row.set("vstatic_main", r.main_norm);
    row.set("vstatic_trace", r.trace);
    row.set("vstatic_traceless", r.traceless_norm);
    row.set("vstatic_form_consistency", trace(r.main, m) + (n - 1) * r.trace);
  }

  row.set("first_bianchi", std::max(symmetry_defect(lc.riemann), first_bianchi_defect(lc.riemann)));
  const Tensor w_explicit = n == 3 ? Tensor::zeros(n, 4) : weyl_from_ricci(lc.riemann, lc.ricci, lc.scalar, m);
  const Tensor w_kn = lc.riemann - kulkarni_nomizu(lc.schouten, metric_tensor(m)) * (opt.kn_sign / (n - 2));
  row.set("weyl_trace_free", trace_defect4(w_kn, m));
  row.set("weyl_reconstruction", norm(w_kn - w_explicit, m));
  if (model.expected_scalar_curvature) row.set("scalar_curvature", lc.scalar - *model.expected_scalar_curvature);
  if (row.wants("einstein")) row.set("einstein", norm(traceless_part(lc.ricci, m), m));
  if (row.wants("weyl_norm")) row.set("weyl_norm", norm(lc.weyl, m));
  if (row.wants("ricci_excess") || row.wants("parallel_ricci_obstruction")) {
    const double excess = full_norm_sq(lc.ricci, m) - lc.scalar * lc.scalar / n;
    row.set("ricci_excess", excess);
    row.set("parallel_ricci_obstruction", model.kappa * n / (n - 1.0) * excess);
  }
  if (row.wants("t_tensor")) row.set("t_tensor", std::sqrt(t_tensor(c).norm_sq));

  if (opt.derivative_checks) {
    const TensorField g_field = [&model](const Point& x) { return metric_tensor(model.metric_at(x)); };
    row.set("metric_compatibility", norm(eng.covariant_derivative(g_field, p), m));
    const auto dr = eng.div_riemann(p);
    row.set("second_bianchi", norm(dr.lhs - dr.rhs, m));
    if (row.wants("parallel_ricci")) row.set("parallel_ricci", norm(c.grad_ricci(), m));
    if (row.wants("cotton_two_path")) {
      const Tensor dw = eng.grad_weyl(p);
      const Tensor c2 = contract(dw, 0, 4, m) * (-(n - 2.0) / (n - 3.0));
      const Tensor& c1 = c.cotton();
      const double scale = std::max({1.0, norm(c1, m), norm(c2, m), norm(dw, m)});
      row.set("cotton_two_path", norm(c1 - c2, m) / scale);
    }
    if (row.wants("cotton_norm")) row.set("cotton_norm", norm(c.cotton(), m));
    if (row.wants("bach3_divergence")) row.set("bach3_divergence", norm(bach3_divergence_residual(c), m));
    if (row.wants("bach_flat")) row.set("bach_flat", norm(c.bach(), m));
    if (row.wants("lemma1")) {
      row.set("lemma1", norm(lemma1_residual(c), m));
      row.set("lemma2", norm(lemma2_residual(c).residual, m));
      row.set("divergence_identity", divergence_identity(c).residual());
    }
    if (row.wants("eq43")) {
      const RadialBachTerms e = radial_bach_terms(c);
      row.set("eq43", e.relative_residual());
      row.set("radial_bach", e.radial_bach);
    } else if (row.wants("radial_bach")) {
      const std::vector<double> v = c.grad_vector();
      row.set("radial_bach", apply_vector(apply_vector(c.bach(), 1, v), 0, v).value());
    }
    if (row.wants("dim3_div_bach")) {
      const Dim3BachIdentity d = dim3_bach_identity(c);
      row.set("dim3_div_bach", d.first());
      row.set("dim3_bach_ricci_cotton", d.second());
    }
  }

  if (row.wants("level_set_umbilicity") && c.grad_norm() > kCriticalGradient) {
    const LevelSetProbe lp = level_set_probe(c);
    row.set("level_set_umbilicity", lp.umbilicity_dev);
    row.set("level_set_grad_norm_variation", lp.grad_norm_tangential_variation);
    row.set("level_set_mixed_ricci", lp.mixed_ricci);
    row.set("level_set_mixed_riemann", lp.mixed_riemann);
    if (model.warping) {
      const ScalarJet phi = (*model.warping)(p[0]);
      row.set("level_set_mean_curvature", std::abs(lp.mean_curv) - (n - 1) * std::abs(phi.d1 / phi.value));
    }
  }
}

}  // namespace detail

/// Evaluate every applicable check at `opt.grid` points. Points are spread over
/// worker threads; values land in per-point slots so the result does not depend
/// on scheduling.
inline BatteryRun run_battery(const MetricModel& model, const BatteryOptions& opt) {
  require(opt.grid >= 1, "grid must be >= 1");
  opt.plan.validate();
  const auto start = std::chrono::steady_clock::now();
  BatteryRun run;
  run.model = &model;
  run.options = opt;
  run.tol = calibrated_tolerance(opt.plan, opt.tol_scale);
  run.checks = battery_checks(model, opt, run.tol);
  run.points = sample_points(model.domain, opt.grid, opt.seed, sampling_margin(opt.plan));
  run.values.resize(run.points.size());

  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const int workers = std::clamp(opt.workers > 0 ? opt.workers : hw, 1, std::max(1, opt.grid));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t k = next++; k < run.points.size(); k = next++) {
      try {
        detail::PointRow row(run.checks, run.values[k]);
        detail::evaluate_point(model, run.points[k], opt, row);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = run.points.size();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  run.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

/// One report per check, reduced in point order.
inline std::vector<IdentityReport> summarize(const BatteryRun& run) {
  const MetricModel& model = *run.model;
  ordered_json params = ordered_json::parse(model.parameters.dump());
  std::vector<IdentityReport> out;
  for (std::size_t k = 0; k < run.checks.size(); ++k) {
    const CheckSpec& spec = run.checks[k];
    Stats s;
    int skipped = 0;
    for (const auto& row : run.values) {
      if (row[k])
        s.add(*row[k]);
      else
        ++skipped;
    }
    IdentityReport r = spec.witness
                           ? witness_report(model.name, params, spec.name, s, spec.bound, run.options.plan,
                                            run.options.seed)
                           : residual_report(model.name, params, spec.name, s, spec.bound, run.options.plan,
                                             run.options.seed);
    if (spec.name == "cotton_two_path") r.note = "relative to max(1, |C|, |C'|, |grad W|)";
    if (spec.name == "eq43") r.note = "relative to max(1, |lhs|, |div|, |T term|)";
    if (skipped > 0) r.note += (r.note.empty() ? "" : "; ") + std::to_string(skipped) + " critical points skipped";
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace vstatic
