#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "vstatic/model.hpp"
#include "vstatic/sampling.hpp"
#include "vstatic/vstatic.hpp"

using namespace vstatic;

namespace {

const DerivativePlan kPlan{};
const double kTol = calibrated_tolerance(kPlan);

std::vector<Point> points(const MetricModel& m, int count) {
  return sample_points(m.domain, count, kDefaultSeed, sampling_margin(kPlan));
}

}  // namespace

TEST(VStatic, ResidualFormsVanishOnCatalog) {
  for (const MetricModel& m : {euclidean_model(3, 5, 2), sphere_model(4, 1, 1), hyperbolic_model(5, 2, 1),
                               cosh_warped_model(5, 1, 1, fibers::h2xh2()), hyperbolic_product_static(1, 3),
                               sphere_product_static(1, 3)}) {
    for (const Point& p : points(m, 6)) {
      const PointContext c(m, p, kPlan);
      const VStaticResidualSet r = vstatic_residuals(c);
      EXPECT_LT(r.main_norm, 1e-10) << m.name;
      EXPECT_LT(std::abs(r.trace), 1e-10) << m.name;
      EXPECT_LT(r.traceless_norm, 1e-10) << m.name;
      EXPECT_NEAR(trace(r.main, c.metric()), -(m.n - 1) * r.trace, 1e-10);
    }
  }
}

TEST(VStatic, TraceRelationHoldsOffShell) {
  const MetricModel m = sphere_cos_squared_pair(4);
  for (const Point& p : points(m, 6)) {
    const PointContext c(m, p, kPlan);
    const VStaticResidualSet r = vstatic_residuals(c);
    EXPECT_GT(r.main_norm, 0.1);
    EXPECT_NEAR(trace(r.main, c.metric()), -(m.n - 1) * r.trace, 1e-10 * (1.0 + std::abs(r.trace)));
  }
}

TEST(VStatic, ScaledPotentialBreaksTheEquation) {
  const MetricModel m = scaled_potential_model(sphere_model(4, 1, 1), 1.1);
  for (const Point& p : points(m, 6)) EXPECT_GT(vstatic_residuals(PointContext(m, p, kPlan)).main_norm, 0.01);
}

TEST(VStatic, RicciDerivativeAndCottonDecomposition) {
  for (const MetricModel& m : {sphere_model(4, 1, 1), cosh_warped_model(5, 1, 1, fibers::h2xh2()),
                               hyperbolic_product_static(1, 3)}) {
    for (const Point& p : points(m, 4)) {
      const PointContext c(m, p, kPlan);
      EXPECT_LT(norm(lemma1_residual(c), c.metric()), kTol) << m.name;
      const Lemma2Terms l2 = lemma2_residual(c);
      EXPECT_LT(norm(l2.residual, c.metric()), kTol) << m.name;
    }
  }
}

TEST(VStatic, CottonDecompositionExercisesWeylTerm) {
  // Einstein, so C = T = 0 and f C = W(∇f) forces W(∇f) = 0 along the gradient.
  const MetricModel m = cosh_warped_model(5, 1, 1, fibers::h2xh2());
  for (const Point& p : points(m, 4)) {
    const PointContext c(m, p, kPlan);
    EXPECT_GT(norm(c.local().weyl, c.metric()), 0.1);
    const Lemma2Terms l2 = lemma2_residual(c);
    EXPECT_LT(l2.w_norm, kTol);
    EXPECT_LT(l2.t_norm, kTol);
  }
}

TEST(VStatic, DivergenceIdentityAndRadialBach) {
  for (const MetricModel& m : {sphere_model(4, 1, 1), hyperbolic_product_static(1, 3)}) {
    for (const Point& p : points(m, 3)) {
      const PointContext c(m, p, kPlan);
      EXPECT_LT(std::abs(divergence_identity(c).residual()), kTol) << m.name;
      const RadialBachTerms e = radial_bach_terms(c);
      EXPECT_LT(std::abs(e.relative_residual()), kTol) << m.name;
    }
  }
  const MetricModel s = sphere_model(5, 1, 1);
  for (const Point& p : points(s, 3)) EXPECT_LT(std::abs(radial_bach_terms(PointContext(s, p, kPlan)).radial_bach), kTol);
}

TEST(VStatic, TTensorWitness) {
  const MetricModel perturbed = perturbed_product_pair();
  for (const Point& p : points(perturbed, 6)) {
    const PointContext c(perturbed, p, kPlan);
    EXPECT_GT(std::sqrt(t_tensor(c).norm_sq), 0.1);
  }
  // T is built from Ric and ∇f only; on an Einstein metric it vanishes for every f,
  // so f = cos² r on the round sphere is not a witness for T.
  const MetricModel cos2 = sphere_cos_squared_pair(4);
  for (const Point& p : points(cos2, 6)) {
    const PointContext c(cos2, p, kPlan);
    EXPECT_LT(std::sqrt(t_tensor(c).norm_sq), 1e-12);
    EXPECT_GT(vstatic_residuals(c).main_norm, 0.1);
  }
}

TEST(VStatic, ThreeDimensionalBachIdentities) {
  const MetricModel m = dim3_control_model();
  for (const Point& p : points(m, 3)) {
    const PointContext c(m, p, kPlan);
    EXPECT_GT(norm(c.cotton(), c.metric()), 0.1);
    EXPECT_LT(norm(bach3_divergence_residual(c), c.metric()), kTol);
  }
  const MetricModel e = euclidean_model(3, 5, 2);
  for (const Point& p : points(e, 3)) {
    const Dim3BachIdentity d = dim3_bach_identity(PointContext(e, p, kPlan));
    EXPECT_LT(std::abs(d.first()), kTol);
    EXPECT_LT(std::abs(d.second()), kTol);
  }
}

TEST(VStatic, ParallelRicciObstruction) {
  const MetricModel prod = hyperbolic_product_static(1, 3);
  for (const Point& p : points(prod, 3)) {
    const ParallelRicciProbe r = parallel_ricci_probe(PointContext(prod, p, kPlan));
    EXPECT_LT(r.grad_ric_norm, kTol);
    EXPECT_NEAR(r.ricci_excess, 1.2, 1e-10);
    EXPECT_DOUBLE_EQ(r.obstruction, 0.0);
  }
}

TEST(LevelSets, EquatorOfSphereIsMinimal) {
  const MetricModel s = sphere_model(4, 1, 1);
  const PointContext c(s, Point{std::numbers::pi / 2, 1.0, 1.2, 2.0}, kPlan);
  const LevelSetProbe probe = level_set_probe(c);
  EXPECT_NEAR(probe.mean_curv, 0.0, 1e-12);
  EXPECT_LT(probe.umbilicity_dev, 1e-12);
  EXPECT_LT(probe.frame_defect, 1e-12);
}

TEST(LevelSets, CoshWarpedMeanCurvature) {
  const MetricModel w = cosh_warped_model(4, 1, 1, fibers::hyperbolic(3));
  const PointContext c(w, Point{1.0, 1.0, 1.2, 2.0}, kPlan);
  const LevelSetProbe probe = level_set_probe(c);
  // f increases with t, so e1 = ∂t and H = (n-1) tanh t.
  EXPECT_NEAR(probe.mean_curv, 3.0 * std::tanh(1.0), 1e-12);
  for (int a = 0; a < 3; ++a) EXPECT_NEAR(probe.second_fund(a, a), std::tanh(1.0), 1e-12);
  EXPECT_LT(probe.umbilicity_dev, 1e-12);
  EXPECT_LT(probe.grad_norm_tangential_variation, 1e-12);
  EXPECT_LT(probe.mixed_ricci, 1e-12);
  EXPECT_LT(probe.mixed_riemann, 1e-12);
}

TEST(LevelSets, CriticalPointThrows) {
  const MetricModel e = euclidean_model(3, 5, 2);
  const PointContext c(e, Point{0.0, 0.0, 0.0}, kPlan);
  try {
    level_set_probe(c);
    FAIL() << "expected CriticalPointError";
  } catch (const CriticalPointError& err) {
    EXPECT_NE(std::string(err.what()).find("probe undefined at critical points"), std::string::npos);
  }
}
