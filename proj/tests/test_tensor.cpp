#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "vstatic/tensor.hpp"

using namespace vstatic;

namespace {

MetricAtPoint s2_metric(double theta) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2, 2);
  g(1, 1) = std::sin(theta) * std::sin(theta);
  return MetricAtPoint(g);
}

MetricAtPoint random_metric(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = u(rng);
  Eigen::MatrixXd g = a * a.transpose() + n * Eigen::MatrixXd::Identity(n, n);
  return MetricAtPoint(0.5 * (g + g.transpose()));
}

Tensor random_tensor(int n, int rank, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Tensor t = Tensor::zeros(n, rank);
  for (double& x : t.data()) x = u(rng);
  return t;
}

Tensor random_symmetric(int n, std::mt19937_64& rng) {
  Tensor t = random_tensor(n, 2, rng);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) t(j, i) = t(i, j);
  t.declare_symmetry(Symmetry::symmetric_pair);
  return t;
}

}  // namespace

TEST(Point, RejectsBadInput) {
  EXPECT_THROW(Point(std::vector<double>{}), PreconditionError);
  EXPECT_THROW(Point({0.0, NAN}), PreconditionError);
  EXPECT_THROW(Point(std::vector<double>(9, 0.0)), PreconditionError);
  EXPECT_EQ(Point({1.0, 2.0}).shifted(1, 0.5)[1], 2.5);
}

TEST(MetricAtPoint, InverseAndDeterminant) {
  const MetricAtPoint m = s2_metric(0.7);
  EXPECT_LT(m.inverse_defect(), 1e-12);
  EXPECT_NEAR(m.det(), std::pow(std::sin(0.7), 2), 1e-15);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
  bad(1, 1) = -1.0;
  EXPECT_THROW(MetricAtPoint{bad}, PreconditionError);
  bad(1, 1) = 1.0;
  bad(0, 1) = 0.3;
  EXPECT_THROW(MetricAtPoint{bad}, PreconditionError);
}

TEST(RaiseLower, MixedRicciOnS2IsIdentity) {
  const MetricAtPoint m = s2_metric(std::numbers::pi / 2);
  const Tensor ric = metric_tensor(m);  // Ric = g on the unit S²
  const Tensor mixed = raise_lower(ric, 0, m, IndexMove::up);
  EXPECT_EQ(mixed.variance(0), Variance::upper);
  EXPECT_NEAR(mixed(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(mixed(1, 1), 1.0, 1e-15);
  EXPECT_NEAR(mixed(0, 1), 0.0, 1e-15);
}

TEST(RaiseLower, MetricRaisesToKronecker) {
  std::mt19937_64 rng(3);
  const MetricAtPoint m = random_metric(4, rng);
  const Tensor d = raise_lower(metric_tensor(m), 0, m, IndexMove::up);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(d(i, j), i == j ? 1.0 : 0.0, 1e-13);
}

TEST(RaiseLower, RoundTripEverySlot) {
  std::mt19937_64 rng(5);
  for (int n : {2, 3, 5}) {
    const MetricAtPoint m = random_metric(n, rng);
    const Tensor t = random_tensor(n, 3, rng);
    for (int s = 0; s < 3; ++s) {
      const Tensor back = raise_lower(raise_lower(t, s, m, IndexMove::up), s, m, IndexMove::down);
      EXPECT_LT((back - t).max_abs(), 1e-13 * std::max(1.0, t.max_abs()));
    }
  }
}

TEST(RaiseLower, Errors) {
  std::mt19937_64 rng(7);
  const MetricAtPoint m = random_metric(3, rng);
  const Tensor t = random_tensor(3, 2, rng);
  EXPECT_THROW(raise_lower(t, 2, m, IndexMove::up), PreconditionError);
  EXPECT_THROW(raise_lower(t, 0, m, IndexMove::down), PreconditionError);
  EXPECT_THROW(raise_lower(t, 0, random_metric(4, rng), IndexMove::up), PreconditionError);
}

TEST(Norms, MetricNormIsDimension) {
  std::mt19937_64 rng(11);
  for (int n : {2, 3, 4, 6}) {
    const MetricAtPoint m = random_metric(n, rng);
    EXPECT_NEAR(full_norm_sq(metric_tensor(m), m), n, 1e-12);
  }
}

TEST(Norms, RicciOfUnitS3) {
  const MetricAtPoint m(Eigen::Vector3d(1.0, 0.4, 0.9).asDiagonal().toDenseMatrix());
  EXPECT_NEAR(full_norm_sq(metric_tensor(m) * 2.0, m), 12.0, 1e-13);
}

TEST(Norms, InvariantUnderFlippingAllSlots) {
  std::mt19937_64 rng(13);
  const MetricAtPoint m = random_metric(4, rng);
  const Tensor t = random_tensor(4, 3, rng);
  const Tensor up = flip_all(t, m);
  EXPECT_NEAR(full_norm_sq(t, m), full_norm_sq(up, m), 1e-12 * full_norm_sq(t, m));
  EXPECT_GT(full_norm_sq(t, m), 0.0);
  EXPECT_EQ(full_norm_sq(Tensor::zeros(4, 3), m), 0.0);
}

TEST(Traceless, Oracles) {
  std::mt19937_64 rng(17);
  const MetricAtPoint m = random_metric(4, rng);
  EXPECT_LT(traceless_part(metric_tensor(m), m).max_abs(), 1e-14);

  const MetricAtPoint e(Eigen::MatrixXd::Identity(2, 2));
  Tensor t = Tensor::zeros(2, 2);
  t(0, 0) = 2.0;
  const Tensor z = traceless_part(t, e);
  EXPECT_DOUBLE_EQ(z(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(z(1, 1), -1.0);

  const Tensor s = random_symmetric(4, rng);
  EXPECT_LT(std::abs(trace(traceless_part(s, m), m)), 1e-12 * s.max_abs());

  Tensor skew = Tensor::zeros(2, 2);
  skew(0, 1) = 1.0;
  EXPECT_THROW(traceless_part(skew, e), PreconditionError);
}

TEST(KulkarniNomizu, FlatComponent) {
  const MetricAtPoint e(Eigen::MatrixXd::Identity(3, 3));
  const Tensor gg = kulkarni_nomizu(metric_tensor(e), metric_tensor(e));
  EXPECT_DOUBLE_EQ(gg(0, 1, 0, 1), 2.0);
  EXPECT_DOUBLE_EQ(gg(0, 1, 1, 0), -2.0);
}

TEST(KulkarniNomizu, SymmetricAndRiemannType) {
  std::mt19937_64 rng(19);
  for (int n : {3, 4, 5}) {
    const Tensor a = random_symmetric(n, rng);
    const Tensor b = random_symmetric(n, rng);
    const Tensor ab = kulkarni_nomizu(a, b);
    EXPECT_LT((ab - kulkarni_nomizu(b, a)).max_abs(), 1e-15);
    EXPECT_LT(symmetry_defect(ab), 1e-15);
    EXPECT_LT(first_bianchi_defect(ab), 1e-14);
  }
  EXPECT_THROW(kulkarni_nomizu(random_symmetric(3, rng), random_symmetric(4, rng)), PreconditionError);
}

TEST(Symmetry, EnforcedClassesHold) {
  std::mt19937_64 rng(23);
  const Tensor raw = random_tensor(4, 4, rng);
  for (Symmetry s : {Symmetry::symmetric_pair, Symmetry::skew_pair, Symmetry::riemann_type}) {
    const Tensor t = enforce_symmetry(raw, s);
    EXPECT_EQ(t.symmetry(), s);
    EXPECT_LT(symmetry_defect(t), 1e-15);
  }
  EXPECT_LT(first_bianchi_defect(enforce_symmetry(raw, Symmetry::riemann_type)), 1e-15);
}

TEST(Contract, MixedAndLowerPairs) {
  std::mt19937_64 rng(29);
  const MetricAtPoint m = random_metric(3, rng);
  const Tensor t = random_tensor(3, 2, rng);
  double expect = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) expect += m.inv(i, j) * t(i, j);
  EXPECT_NEAR(trace(t, m), expect, 1e-14);
  const Tensor mixed = raise_lower(t, 0, m, IndexMove::up);
  EXPECT_NEAR(contract(mixed, 0, 1, m).value(), expect, 1e-13);
}

TEST(ApplyVector, MatchesManualSum) {
  std::mt19937_64 rng(31);
  const Tensor t = random_tensor(3, 3, rng);
  const std::vector<double> v{0.5, -1.0, 2.0};
  const Tensor out = apply_vector(t, 1, v);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      double s = 0.0;
      for (int j = 0; j < 3; ++j) s += t(i, j, k) * v[static_cast<std::size_t>(j)];
      EXPECT_NEAR(out(i, k), s, 1e-15);
    }
}
