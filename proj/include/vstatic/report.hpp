#pragma once

// Named residual checks aggregated over sample points, and their JSON form.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "vstatic/finite_difference.hpp"

namespace vstatic {

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr const char* kVersion = "0.1.0";

using ordered_json = nlohmann::ordered_json;

/// Running max / mean / min of a per-point quantity.
struct Stats {
  int count = 0;
  double max = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  bool finite = true;

  void add(double v) {
    if (!std::isfinite(v)) finite = false;
    const double a = std::abs(v);
    ++count;
    max = std::max(max, a);
    min = std::min(min, v);
    sum += a;
  }
  double mean() const { return count ? sum / count : 0.0; }
};

/// One named check over a set of points.
///
/// kind "residual": pass iff every point has |value| < tol.
/// kind "witness":  pass iff every point has value > threshold (a quantity
/// that must stay away from zero, e.g. a non-Einstein certificate).
struct IdentityReport {
  std::string model_name;
  ordered_json parameters = ordered_json::object();
  std::string check_name;
  std::string kind = "residual";
  int num_points = 0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double tol = 0.0;
  double min_value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  DerivativePlan plan;
  std::uint64_t seed = 0;
  std::string note;
};

inline IdentityReport residual_report(const std::string& model, const ordered_json& params, const std::string& check,
                                      const Stats& s, double tol, const DerivativePlan& plan, std::uint64_t seed) {
  IdentityReport r;
  r.model_name = model;
  r.parameters = params;
  r.check_name = check;
  r.num_points = s.count;
  r.max_residual = s.max;
  r.mean_residual = s.mean();
  r.tol = tol;
  r.pass = s.finite && s.count > 0 && s.max < tol;
  r.plan = plan;
  r.seed = seed;
  return r;
}

inline IdentityReport witness_report(const std::string& model, const ordered_json& params, const std::string& check,
                                     const Stats& s, double threshold, const DerivativePlan& plan, std::uint64_t seed) {
  IdentityReport r;
  r.model_name = model;
  r.parameters = params;
  r.check_name = check;
  r.kind = "witness";
  r.num_points = s.count;
  r.max_residual = s.max;
  r.mean_residual = s.mean();
  r.min_value = s.count ? s.min : 0.0;
  r.threshold = threshold;
  r.pass = s.finite && s.count > 0 && s.min > threshold;
  r.plan = plan;
  r.seed = seed;
  return r;
}

inline ordered_json to_json(const IdentityReport& r) {
  ordered_json j;
  j["model_name"] = r.model_name;
  j["parameters"] = r.parameters;
  j["check_name"] = r.check_name;
  j["kind"] = r.kind;
  j["num_points"] = r.num_points;
  j["max_residual"] = r.max_residual;
  j["mean_residual"] = r.mean_residual;
  j["tol"] = r.tol;
  if (r.kind == "witness") {
    j["min_value"] = r.min_value;
    j["threshold"] = r.threshold;
  }
  j["pass"] = r.pass;
  j["plan"] = {{"h", r.plan.base_step},
               {"scheme", r.plan.scheme},
               {"richardson_levels", r.plan.richardson_levels},
               {"depth_growth", r.plan.depth_growth}};
  j["seed"] = r.seed;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

struct SuiteSummary {
  std::string command;
  std::vector<IdentityReport> reports;
  double wall_time = 0.0;

  bool overall_pass() const {
    return !reports.empty() &&
           std::all_of(reports.begin(), reports.end(), [](const IdentityReport& r) { return r.pass; });
  }
};

inline ordered_json to_json(const SuiteSummary& s, bool include_wall_time = true) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["version"] = kVersion;
  j["command"] = s.command;
  j["overall_pass"] = s.overall_pass();
  ordered_json list = ordered_json::array();
  for (const auto& r : s.reports) list.push_back(to_json(r));
  j["reports"] = std::move(list);
  if (include_wall_time) j["wall_time"] = s.wall_time;
  return j;
}

}  // namespace vstatic
