#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "vstatic/model.hpp"
#include "vstatic/sampling.hpp"

using namespace vstatic;

namespace {

std::string precondition_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const PreconditionError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Models, TagsAndConstants) {
  const MetricModel s = sphere_model(4, 1.0, 1.0);
  EXPECT_EQ(s.n, 4);
  EXPECT_TRUE(s.has_tag("vstatic"));
  EXPECT_TRUE(s.has_tag("einstein"));
  EXPECT_DOUBLE_EQ(*s.expected_scalar_curvature, 12.0);
  EXPECT_TRUE(s.warping.has_value());

  const MetricModel h = hyperbolic_model(5, 2.0, 1.0);
  EXPECT_DOUBLE_EQ(*h.expected_scalar_curvature, -20.0);

  const MetricModel e = euclidean_model(3, 5.0, 2.0);
  EXPECT_DOUBLE_EQ(*e.expected_scalar_curvature, 0.0);

  const MetricModel w = cosh_warped_model(5, 1.0, 1.0, fibers::h2xh2());
  EXPECT_TRUE(w.has_tag("conformally-curved"));
  EXPECT_DOUBLE_EQ(*w.expected_scalar_curvature, -20.0);
  EXPECT_FALSE(cosh_warped_model(4, 1.0, 1.0, fibers::hyperbolic(3)).has_tag("conformally-curved"));

  const MetricModel p = hyperbolic_product_static(1, 3);
  EXPECT_EQ(p.n, 5);
  EXPECT_DOUBLE_EQ(p.kappa, 0.0);
  EXPECT_TRUE(p.has_tag("static-vacuum"));
  EXPECT_FALSE(p.has_tag("einstein"));
  EXPECT_DOUBLE_EQ(*p.expected_scalar_curvature, -8.0);
  EXPECT_DOUBLE_EQ(*sphere_product_static(1, 3).expected_scalar_curvature, 8.0);
}

TEST(Models, PotentialValues) {
  const MetricModel s = sphere_model(4, 3.0, 1.5);
  Point p{1.0, 1.0, 1.0, 1.0};
  EXPECT_NEAR(s.potential_at(p), (3.0 * std::cos(1.0) - 1.5) / 3.0, 1e-15);

  const MetricModel e = euclidean_model(3, 5.0, 2.0);
  const PotentialJet j = e.potential({1.0, 0.0, -1.0});
  EXPECT_NEAR(j.value, (5.0 - 2.0) / 2.0, 1e-15);
  EXPECT_NEAR(j.grad(0), -1.0, 1e-15);
  EXPECT_NEAR(j.hess(2, 2), -1.0, 1e-15);
}

TEST(Models, PerturbedPairsDropStaticTags) {
  const MetricModel q = perturbed_product_pair();
  EXPECT_FALSE(q.is_vstatic_like());
  EXPECT_TRUE(q.has_tag("perturbed"));
  EXPECT_FALSE(q.warping.has_value());
  const MetricModel c = sphere_cos_squared_pair(4);
  EXPECT_FALSE(c.has_tag("vstatic"));
  EXPECT_TRUE(c.has_tag("einstein"));
}

TEST(Models, PreconditionErrors) {
  EXPECT_EQ(precondition_message([] { sphere_model(2, 1.0, 1.0); }), "n must be >= 3");
  EXPECT_EQ(precondition_message([] { euclidean_model(2, 1.0, 1.0); }), "n must be >= 3");
  EXPECT_FALSE(precondition_message([] { sphere_model(4, 1.0, 0.0); }).empty());
  EXPECT_FALSE(precondition_message([] { sphere_model(4, 0.0, 1.0); }).empty());
  EXPECT_FALSE(precondition_message([] { hyperbolic_product_static(1, 1); }).empty());
  EXPECT_FALSE(precondition_message([] { cosh_warped_model(4, 1.0, 1.0, fibers::round_sphere(3)); }).empty());
  EXPECT_FALSE(precondition_message([] { cosh_warped_model(4, 1.0, 1.0, fibers::h2xh2()); }).empty());
}

TEST(Models, FiberValidation) {
  EXPECT_LT(fiber_einstein_defect(fibers::h2xh2()), 1e-12);
  EXPECT_LT(fiber_einstein_defect(fibers::hyperbolic(3)), 1e-12);
  WarpedFiberSpec bad = fibers::hyperbolic(3);
  bad.einstein_constant = -1.0;
  const std::string msg = precondition_message([&] { validate_fiber(bad); });
  EXPECT_NE(msg.find("not Einstein"), std::string::npos) << msg;

  // H²(-1) × H²(-3) is not Einstein at all.
  const DiagonalChart h = charts::hyperbolic_polar(2);
  WarpedFiberSpec mixed{"mixed", charts::product(h, charts::scaled(h, 1.0 / 3.0)), -3.0, false};
  EXPECT_THROW(validate_fiber(mixed), PreconditionError);
}

TEST(Models, GenericWarpedRejectsNonPositiveWarping) {
  EXPECT_THROW(generic_warped_model(4, profiles::cos(), {0.5, 2.0}, fibers::round_sphere(3), profiles::cos()),
               PreconditionError);
  EXPECT_NO_THROW(generic_warped_model(4, profiles::sin(), {0.2, 2.9}, fibers::round_sphere(3), profiles::cos()));
}

TEST(Models, ByName) {
  for (const auto& name : model_names()) {
    const MetricModel m = model_by_name(name, {});
    EXPECT_GE(m.n, 3) << name;
    EXPECT_FALSE(m.domain.empty()) << name;
  }
  ModelParams prm;
  prm.n = 5;
  prm.fiber = "h2xh2";
  EXPECT_TRUE(model_by_name("cosh-warped", prm).has_tag("conformally-curved"));
  prm.n = 2;
  EXPECT_EQ(precondition_message([&] { model_by_name("sphere", prm); }), "n must be >= 3");
  EXPECT_NE(precondition_message([] { model_by_name("torus", {}); }).find("unknown model"), std::string::npos);
  prm.n = 4;
  prm.fiber = "flat";
  EXPECT_NE(precondition_message([&] { model_by_name("cosh-warped", prm); }).find("unknown fiber"),
            std::string::npos);
}

TEST(Sampling, DeterministicAndInsideMargin) {
  const MetricModel s = sphere_model(4, 1.0, 1.0);
  const auto a = sample_points(s.domain, 50, 7, 0.3);
  const auto b = sample_points(s.domain, 50, 7, 0.3);
  const auto c = sample_points(s.domain, 50, 8, 0.3);
  ASSERT_EQ(a.size(), 50u);
  auto coords = [](const std::vector<Point>& ps) {
    std::vector<double> out;
    for (const auto& p : ps) out.insert(out.end(), p.coords().begin(), p.coords().end());
    return out;
  };
  EXPECT_EQ(coords(a), coords(b));
  EXPECT_NE(coords(a), coords(c));
  for (const auto& p : a)
    for (std::size_t i = 0; i < static_cast<std::size_t>(p.dim()); ++i) {
      EXPECT_GE(p[i], s.domain[i].lo + 0.3);
      EXPECT_LE(p[i], s.domain[i].hi - 0.3);
    }
  EXPECT_THROW(sample_points(s.domain, 5, 1, 2.0), PreconditionError);
}
