#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "vstatic/curvature.hpp"
#include "vstatic/model.hpp"
#include "vstatic/sampling.hpp"

using namespace vstatic;

namespace {

// Rm = c (g ⊙ g)/2 for constant curvature c.
double space_form_defect(const LocalCurvature& lc, double c) {
  const Tensor g = metric_tensor(lc.metric);
  return norm(lc.riemann - kulkarni_nomizu(g, g) * (0.5 * c), lc.metric);
}

}  // namespace

TEST(Curvature, RoundTwoSphereChristoffel) {
  const DiagonalChart s2 = charts::round_sphere(2);
  const Point p{0.7, 1.3};
  const MetricAtPoint m(s2.metric(p));
  const Tensor gamma = christoffel_from_jet(m, s2.derivatives(p).dg);
  EXPECT_NEAR(gamma(0, 1, 1), -std::sin(0.7) * std::cos(0.7), 1e-15);
  EXPECT_NEAR(gamma(1, 0, 1), std::cos(0.7) / std::sin(0.7), 1e-15);
  EXPECT_NEAR(gamma(1, 1, 0), std::cos(0.7) / std::sin(0.7), 1e-15);
  EXPECT_NEAR(gamma(0, 0, 0), 0.0, 1e-15);
  EXPECT_NEAR(gamma(1, 1, 1), 0.0, 1e-15);
  const MetricDerivatives d = s2.derivatives(p);
  const LocalCurvature lc = curvature_from_jet(m, d.dg, d.ddg);
  EXPECT_NEAR(lc.scalar, 2.0, 1e-13);
}

TEST(Curvature, WarpedChristoffelRadialComponent) {
  // Γ^r_{αβ} = -φφ' g0_{αβ} for dr² + φ² g0.
  const MetricModel w = cosh_warped_model(4, 1.0, 1.0, fibers::hyperbolic(3));
  const CurvatureEngine eng(w, DerivativePlan{});
  const Point p{0.6, 1.1, 1.2, 2.0};
  const Tensor gamma = eng.christoffel(p);
  const MetricAtPoint g0 = fibers::hyperbolic(3).fiber_metric_at(Point{1.1, 1.2, 2.0});
  const double pp = std::cosh(0.6) * std::sinh(0.6);
  for (int a = 1; a < 4; ++a)
    for (int b = 1; b < 4; ++b) EXPECT_NEAR(gamma(0, a, b), -pp * g0.g()(a - 1, b - 1), 1e-13);
}

TEST(Curvature, SpaceForms) {
  struct Case {
    MetricModel model;
    double c;
  };
  for (const Case& k : {Case{sphere_model(4, 1, 1), 1.0}, Case{hyperbolic_model(5, 1, 1), -1.0},
                        Case{euclidean_model(3, 5, 2), 0.0}}) {
    const CurvatureEngine eng(k.model, DerivativePlan{});
    for (const Point& p : sample_points(k.model.domain, 8, kDefaultSeed)) {
      const LocalCurvature lc = eng.local(p);
      const int n = k.model.n;
      EXPECT_LT(space_form_defect(lc, k.c), 1e-12) << k.model.name;
      EXPECT_NEAR(lc.scalar, k.c * n * (n - 1), 1e-11);
      EXPECT_LT(norm(lc.ricci - metric_tensor(lc.metric) * (k.c * (n - 1)), lc.metric), 1e-12);
      // A = Ric - R g/(2(n-1)) = c (n-2)/2 g
      EXPECT_LT(norm(lc.schouten - metric_tensor(lc.metric) * (k.c * (n - 2) / 2.0), lc.metric), 1e-12);
      EXPECT_LT(norm(lc.weyl, lc.metric), 1e-12);
    }
  }
}

TEST(Curvature, WeylOfConformallyCurvedModelIsTraceFreeAndNonzero) {
  const MetricModel w = cosh_warped_model(5, 1.0, 1.0, fibers::h2xh2());
  const CurvatureEngine eng(w, DerivativePlan{});
  for (const Point& p : sample_points(w.domain, 8, kDefaultSeed)) {
    const LocalCurvature lc = eng.local(p);
    EXPECT_GT(norm(lc.weyl, lc.metric), 0.1);
    EXPECT_LT(trace_defect4(lc.weyl, lc.metric), 1e-12);
    EXPECT_LT(norm(lc.weyl - weyl_from_ricci(lc.riemann, lc.ricci, lc.scalar, lc.metric), lc.metric), 1e-12);
    EXPECT_LT(first_bianchi_defect(lc.riemann), 1e-12);
  }
}

TEST(Curvature, NumericJetMatchesAnalyticJet) {
  const MetricModel w = cosh_warped_model(5, 1.0, 1.0, fibers::h2xh2());
  DerivativePlan numeric;
  numeric.use_analytic = {false, false};
  const CurvatureEngine a(w, DerivativePlan{});
  const CurvatureEngine b(w, numeric);
  for (const Point& p : sample_points(w.domain, 4, kDefaultSeed, sampling_margin(numeric))) {
    const LocalCurvature la = a.local(p);
    const LocalCurvature lb = b.local(p);
    EXPECT_LT(norm(la.riemann - lb.riemann, la.metric), 1e-6);
  }
}

// Derivative tensors vanish identically on space forms, so what is measured
// is pure discretisation error.
TEST(Curvature, CalibratedToleranceCoversSphereDerivatives) {
  const MetricModel s = sphere_model(4, 1.0, 1.0);
  for (double h : {1e-3, 2e-3, 4e-3}) {
    DerivativePlan plan;
    plan.base_step = h;
    const double tol = calibrated_tolerance(plan);
    const CurvatureEngine eng(s, plan);
    double worst = 0.0;
    for (const Point& p : sample_points(s.domain, 6, kDefaultSeed, sampling_margin(plan))) {
      const MetricAtPoint m = s.metric_at(p);
      worst = std::max(worst, norm(eng.grad_ricci(p), m));
      worst = std::max(worst, norm(eng.cotton_from_weyl(p), m));
      worst = std::max(worst, norm(eng.bach(p), m));
    }
    EXPECT_LT(worst, tol / 10.0) << "h = " << h;
  }
}

TEST(Curvature, FourthOrderConvergence) {
  // Plain order-4 stencil, no extrapolation, fully numeric metric jet.
  const MetricModel s = sphere_model(4, 1.0, 1.0);
  auto error = [&](double h) {
    DerivativePlan plan;
    plan.base_step = h;
    plan.richardson_levels = 1;
    plan.depth_growth = 1.0;
    plan.use_analytic = {false, false};
    const CurvatureEngine eng(s, plan);
    double worst = 0.0;
    for (const Point& p : sample_points(s.domain, 6, kDefaultSeed, 0.4))
      worst = std::max(worst, std::abs(eng.local(p).scalar - 12.0));
    return worst;
  };
  const double rate = std::log2(error(0.04) / error(0.02));
  EXPECT_GE(rate, 3.5);
  EXPECT_LE(rate, 4.5);
}

TEST(Curvature, CottonRoutesAgreeOnControlModel) {
  const MetricModel m = doubly_warped_control_model();
  const DerivativePlan plan;
  const CurvatureEngine eng(m, plan);
  for (const Point& p : sample_points(m.domain, 4, kDefaultSeed, sampling_margin(plan))) {
    const Tensor c1 = eng.cotton(p);
    const Tensor c2 = eng.cotton_from_weyl(p);
    const MetricAtPoint g = m.metric_at(p);
    EXPECT_GT(norm(c1, g), 0.1);
    EXPECT_LT(norm(c1 - c2, g) / std::max(1.0, norm(c1, g)), 1e-6);
  }
}

TEST(Curvature, StencilLeavingDomainThrows) {
  const MetricModel s = sphere_model(4, 1.0, 1.0);
  const CurvatureEngine eng(s, DerivativePlan{});
  EXPECT_THROW(eng.grad_ricci(Point{0.2001, 1.0, 1.0, 1.0}), StencilError);
}

TEST(Curvature, PlanValidation) {
  DerivativePlan plan;
  plan.scheme = 3;
  EXPECT_THROW(plan.validate(), PreconditionError);
  plan = DerivativePlan{};
  plan.base_step = -1.0;
  EXPECT_THROW(plan.validate(), PreconditionError);
  EXPECT_THROW(calibrated_tolerance(DerivativePlan{}, 0.0), PreconditionError);
}
