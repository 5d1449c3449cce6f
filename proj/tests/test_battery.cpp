#include <gtest/gtest.h>

#include <set>
#include <string>

#include "vstatic/battery.hpp"

using namespace vstatic;

namespace {

const IdentityReport& find(const std::vector<IdentityReport>& rs, const std::string& name) {
  for (const auto& r : rs)
    if (r.check_name == name) return r;
  throw std::runtime_error("missing report " + name);
}

BatteryOptions small(int grid, bool derivatives = true) {
  BatteryOptions o;
  o.grid = grid;
  o.derivative_checks = derivatives;
  return o;
}

}  // namespace

TEST(Battery, SphereAllChecksPass) {
  const MetricModel s = sphere_model(4, 1, 1);
  const BatteryRun run = run_battery(s, small(6));
  const auto reports = summarize(run);
  std::set<std::string> names;
  for (const auto& r : reports) {
    EXPECT_TRUE(r.pass) << r.check_name << " " << r.max_residual;
    names.insert(r.check_name);
  }
  for (const char* n : {"vstatic_main", "vstatic_trace", "lemma1", "lemma2", "divergence_identity", "eq43",
                        "radial_bach", "bach_flat", "level_set_umbilicity"})
    EXPECT_TRUE(names.count(n)) << n;
  EXPECT_FALSE(names.count("bach3_divergence"));
}

TEST(Battery, KulkarniNomizuSignFlipBreaksWeylChecks) {
  const MetricModel w = cosh_warped_model(5, 1, 1, fibers::h2xh2());
  BatteryOptions o = small(10, false);
  ASSERT_TRUE(summarize(run_battery(w, o)).size() > 0);
  EXPECT_TRUE(find(summarize(run_battery(w, o)), "weyl_reconstruction").pass);
  o.kn_sign = -1.0;
  const auto flipped = summarize(run_battery(w, o));
  EXPECT_FALSE(find(flipped, "weyl_reconstruction").pass);
  EXPECT_FALSE(find(flipped, "weyl_trace_free").pass);
  EXPECT_TRUE(find(flipped, "vstatic_main").pass);
}

TEST(Battery, StaticProductsAreNotEinstein) {
  for (const MetricModel& m : {hyperbolic_product_static(1, 3), sphere_product_static(1, 3)}) {
    const auto reports = summarize(run_battery(m, small(8, false)));
    const IdentityReport& excess = find(reports, "ricci_excess");
    EXPECT_EQ(excess.kind, "witness");
    EXPECT_TRUE(excess.pass);
    EXPECT_NEAR(excess.min_value, 1.2, 1e-9);
    EXPECT_TRUE(find(reports, "vstatic_main").pass);
  }
}

TEST(Battery, PerturbedPairFails) {
  const MetricModel q = perturbed_product_pair();
  const BatteryRun run = run_battery(q, small(8));
  const auto reports = summarize(run);
  EXPECT_FALSE(find(reports, "vstatic_main").pass);
  EXPECT_FALSE(find(reports, "lemma1").pass);
  EXPECT_FALSE(find(reports, "divergence_identity").pass);
  EXPECT_EQ(run.count_above("vstatic_main", 10.0 * run.tol), run.evaluated("vstatic_main"));
  SuiteSummary s{"verify", reports, run.wall_time};
  EXPECT_FALSE(s.overall_pass());
}

TEST(Battery, ThreeDimensionalControl) {
  const MetricModel m = dim3_control_model();
  const auto reports = summarize(run_battery(m, small(6)));
  EXPECT_TRUE(find(reports, "bach3_divergence").pass);
  EXPECT_TRUE(find(reports, "cotton_norm").pass);
  EXPECT_TRUE(find(reports, "weyl_reconstruction").pass);
}

TEST(Battery, DoublyWarpedCottonRoutes) {
  const MetricModel m = doubly_warped_control_model();
  const auto reports = summarize(run_battery(m, small(6)));
  const IdentityReport& two = find(reports, "cotton_two_path");
  EXPECT_TRUE(two.pass) << two.max_residual;
  EXPECT_FALSE(two.note.empty());
  EXPECT_TRUE(find(reports, "cotton_norm").pass);
}

TEST(Battery, DeterministicAcrossWorkerCounts) {
  const MetricModel w = cosh_warped_model(4, 1, 1, fibers::hyperbolic(3));
  BatteryOptions a = small(5);
  a.workers = 1;
  BatteryOptions b = a;
  b.workers = 3;
  const SuiteSummary sa{"verify", summarize(run_battery(w, a)), 0.0};
  const SuiteSummary sb{"verify", summarize(run_battery(w, b)), 0.0};
  EXPECT_EQ(to_json(sa, false).dump(), to_json(sb, false).dump());
}

TEST(Battery, SeedChangesPoints) {
  const MetricModel s = sphere_model(4, 1, 1);
  BatteryOptions a = small(3, false);
  BatteryOptions b = a;
  b.seed = a.seed + 1;
  EXPECT_NE(run_battery(s, a).points[0].coords()[0], run_battery(s, b).points[0].coords()[0]);
}

TEST(Report, JsonSchema) {
  const MetricModel s = sphere_model(4, 1, 1);
  const BatteryRun run = run_battery(s, small(3, false));
  const SuiteSummary sum{"verify", summarize(run), run.wall_time};
  const ordered_json j = to_json(sum);
  EXPECT_EQ(j["schema_version"], "1.0");
  EXPECT_EQ(j["command"], "verify");
  EXPECT_TRUE(j["overall_pass"].get<bool>());
  EXPECT_TRUE(j.contains("wall_time"));
  EXPECT_FALSE(to_json(sum, false).contains("wall_time"));
  ASSERT_FALSE(j["reports"].empty());
  const auto& r = j["reports"][0];
  for (const char* key : {"model_name", "parameters", "check_name", "kind", "num_points", "max_residual",
                          "mean_residual", "tol", "pass", "plan", "seed"})
    EXPECT_TRUE(r.contains(key)) << key;
  EXPECT_EQ(r["model_name"], "sphere");
  EXPECT_EQ(r["num_points"], 3);
  EXPECT_EQ(r["plan"]["scheme"], 4);
  EXPECT_EQ(r["seed"], kDefaultSeed);
}

TEST(Report, ResidualAndWitnessVerdicts) {
  Stats s;
  s.add(1e-9);
  s.add(-2e-9);
  const auto ok = residual_report("m", {}, "c", s, 1e-8, DerivativePlan{}, 1);
  EXPECT_TRUE(ok.pass);
  EXPECT_DOUBLE_EQ(ok.max_residual, 2e-9);
  EXPECT_FALSE(residual_report("m", {}, "c", s, 1e-9, DerivativePlan{}, 1).pass);
  Stats nan;
  nan.add(std::nan(""));
  EXPECT_FALSE(residual_report("m", {}, "c", nan, 1.0, DerivativePlan{}, 1).pass);
  EXPECT_FALSE(residual_report("m", {}, "c", Stats{}, 1.0, DerivativePlan{}, 1).pass);
  Stats w;
  w.add(0.5);
  w.add(0.2);
  EXPECT_TRUE(witness_report("m", {}, "c", w, 0.1, DerivativePlan{}, 1).pass);
  EXPECT_FALSE(witness_report("m", {}, "c", w, 0.3, DerivativePlan{}, 1).pass);
}
