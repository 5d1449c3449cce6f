#pragma once

// Catalog of V-static and static-vacuum triples (M, g, f) with constant κ,
// each on a single diagonal chart with closed-form metric derivatives.

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "vstatic/chart.hpp"
#include "vstatic/errors.hpp"
#include "vstatic/riemann.hpp"
#include "vstatic/sampling.hpp"
#include "vstatic/tensor.hpp"
#include "vstatic/warp_ode.hpp"

namespace vstatic {

/// f with its coordinate gradient and coordinate Hessian.
struct PotentialJet {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

using Potential = std::function<PotentialJet(const Point&)>;

namespace potentials {

/// f(x) = p(x_coord).
inline Potential of_coordinate(Profile p, int coord, int n) {
  return [p = std::move(p), coord, n](const Point& x) {
    const ScalarJet j = p(x[static_cast<std::size_t>(coord)]);
    PotentialJet out{j.value, Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
    out.grad(coord) = j.d1;
    out.hess(coord, coord) = j.d2;
    return out;
  };
}

/// a·f + b·h.
inline Potential combine(Potential f, double a, Potential h, double b) {
  return [f = std::move(f), h = std::move(h), a, b](const Point& x) {
    PotentialJet u = f(x);
    const PotentialJet v = h(x);
    u.value = a * u.value + b * v.value;
    u.grad = a * u.grad + b * v.grad;
    u.hess = a * u.hess + b * v.hess;
    return u;
  };
}

inline Potential scaled(Potential f, double a) {
  return [f = std::move(f), a](const Point& x) {
    PotentialJet u = f(x);
    u.value *= a;
    u.grad *= a;
    u.hess *= a;
    return u;
  };
}

inline Potential constant(double c, int n) {
  return [c, n](const Point&) {
    return PotentialJet{c, Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
  };
}

}  // namespace potentials

struct MetricModel {
  std::string name;
  int n = 0;
  std::vector<Interval> domain;
  double kappa = 0.0;
  std::function<MetricAtPoint(const Point&)> metric_at;
  Potential potential;
  std::function<MetricDerivatives(const Point&)> analytic_metric_derivs;  // may be empty
  std::optional<double> expected_scalar_curvature;
  std::set<std::string> tags;
  nlohmann::json parameters = nlohmann::json::object();
  // φ when g = dr² + φ(r)² g0 with r the first coordinate and f = f(r).
  std::optional<Profile> warping;

  double potential_at(const Point& p) const { return potential(p).value; }
  bool has_tag(const std::string& t) const { return tags.count(t) > 0; }
  bool is_vstatic_like() const { return has_tag("vstatic") || has_tag("static-vacuum"); }
};

inline MetricModel model_from_chart(std::string name, const DiagonalChart& chart, double kappa,
                                    Potential f, std::set<std::string> tags,
                                    std::optional<double> expected_R, nlohmann::json params) {
  MetricModel m;
  m.name = std::move(name);
  m.n = chart.dim();
  m.domain = chart.domain();
  m.kappa = kappa;
  m.metric_at = [chart](const Point& p) { return MetricAtPoint(chart.metric(p)); };
  m.analytic_metric_derivs = [chart](const Point& p) { return chart.derivatives(p); };
  m.potential = std::move(f);
  m.expected_scalar_curvature = expected_R;
  m.tags = std::move(tags);
  m.parameters = std::move(params);
  if (m.has_tag("vstatic")) require(kappa != 0.0, "kappa must be nonzero for a V-static model");
  if (m.has_tag("static-vacuum")) require(kappa == 0.0, "static vacuum models have kappa = 0");
  return m;
}

/// Einstein fiber (Σ, g0) with Ric = λ g0 for warped constructions.
struct WarpedFiberSpec {
  std::string fiber_name;
  DiagonalChart chart;
  double einstein_constant = 0.0;
  bool constant_curvature = false;

  int fiber_dim() const { return chart.dim(); }
  MetricAtPoint fiber_metric_at(const Point& p) const { return MetricAtPoint(chart.metric(p)); }
};

/// Largest g-norm of Ric - λ g0 over `count` sampled fiber points.
inline double fiber_einstein_defect(const WarpedFiberSpec& fiber, int count = 16,
                                    std::uint64_t seed = kDefaultSeed) {
  double worst = 0.0;
  for (const Point& p : sample_points(fiber.chart.domain(), count, seed)) {
    const MetricDerivatives d = fiber.chart.derivatives(p);
    const LocalCurvature c = curvature_from_jet(fiber.fiber_metric_at(p), d.dg, d.ddg);
    const Tensor defect = c.ricci - metric_tensor(c.metric) * fiber.einstein_constant;
    worst = std::max(worst, norm(defect, c.metric));
  }
  return worst;
}

inline void validate_fiber(const WarpedFiberSpec& fiber, double tol = 1e-9) {
  require(fiber.fiber_dim() >= 2, "fiber dimension must be >= 2");
  require(fiber_einstein_defect(fiber) < tol, "fiber '" + fiber.fiber_name + "' is not Einstein with constant " +
                                                  std::to_string(fiber.einstein_constant));
}

namespace fibers {

/// Unit round S^m, λ = m - 1.
inline WarpedFiberSpec round_sphere(int m) {
  return {"round", charts::round_sphere(m), static_cast<double>(m - 1), true};
}

/// H^m of curvature -1 in polar form, λ = -(m - 1).
inline WarpedFiberSpec hyperbolic(int m) {
  require(m >= 2, "hyperbolic fiber needs dimension >= 2");
  return {"hyperbolic", charts::hyperbolic_polar(m), -static_cast<double>(m - 1), true};
}

/// H²(-3) × H²(-3): Einstein with λ = -3, not of constant curvature.
inline WarpedFiberSpec h2xh2() {
  const DiagonalChart h = charts::scaled(charts::hyperbolic_polar(2), 1.0 / 3.0);
  return {"h2xh2", charts::product(h, h), -3.0, false};
}

inline WarpedFiberSpec by_name(const std::string& name, int m) {
  if (name == "round") return round_sphere(m);
  if (name == "hyperbolic") return hyperbolic(m);
  if (name == "h2xh2") {
    require(m == 4, "fiber h2xh2 has dimension 4 (use n = 5)");
    return h2xh2();
  }
  throw PreconditionError("unknown fiber '" + name + "' (round, hyperbolic, h2xh2)");
}

}  // namespace fibers

/// R^n with f = (A - κ|x|²/2)/(n-1) on [-2, 2]^n.
inline MetricModel euclidean_model(int n, double A, double kappa) {
  require(n >= 3, "n must be >= 3");
  const double c = 1.0 / (n - 1);
  Potential f = [n, A, kappa, c](const Point& x) {
    PotentialJet j{0.0, Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) {
      r2 += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
      j.grad(i) = -kappa * c * x[static_cast<std::size_t>(i)];
      j.hess(i, i) = -kappa * c;
    }
    j.value = c * (A - 0.5 * kappa * r2);
    return j;
  };
  return model_from_chart("euclidean", charts::euclidean(n, {-2.0, 2.0}), kappa, std::move(f), {"vstatic"},
                          0.0, {{"n", n}, {"A", A}, {"kappa", kappa}});
}

/// Unit S^n in polar form, f = (A cos r - κ)/(n-1).
inline MetricModel sphere_model(int n, double A, double kappa) {
  require(n >= 3, "n must be >= 3");
  require(A != 0.0, "A must be nonzero (f would be constant)");
  Potential f = potentials::of_coordinate(profiles::affine(profiles::cos(), A / (n - 1), -kappa / (n - 1)), 0, n);
  MetricModel m = model_from_chart("sphere", charts::sphere_polar(n), kappa, std::move(f), {"vstatic", "einstein"},
                                   static_cast<double>(n) * (n - 1), {{"n", n}, {"A", A}, {"kappa", kappa}});
  m.warping = profiles::sin();
  return m;
}

/// H^n in polar form, r in [0.2, 3], f = (κ - A cosh r)/(n-1).
inline MetricModel hyperbolic_model(int n, double A, double kappa) {
  require(n >= 3, "n must be >= 3");
  require(A != 0.0, "A must be nonzero (f would be constant)");
  Potential f = potentials::of_coordinate(profiles::affine(profiles::cosh(), -A / (n - 1), kappa / (n - 1)), 0, n);
  MetricModel m = model_from_chart("hyperbolic", charts::hyperbolic_polar(n), kappa, std::move(f),
                                   {"vstatic", "einstein"}, -static_cast<double>(n) * (n - 1),
                                   {{"n", n}, {"A", A}, {"kappa", kappa}});
  m.warping = profiles::sinh();
  return m;
}

/// dt² + cosh²t g0 over an Einstein fiber with λ = -(n-2), f = κ(A sinh t + 1)/(n-1).
/// Always Einstein with Ric = -(n-1) g.
inline MetricModel cosh_warped_model(int n, double A, double kappa, const WarpedFiberSpec& fiber) {
  require(n >= 3, "n must be >= 3");
  require(fiber.fiber_dim() == n - 1, "fiber dimension must be n - 1");
  require(A > 0.0, "A must be positive");
  require(std::abs(fiber.einstein_constant + (n - 2)) < 1e-12,
          "fiber Einstein constant must be -(n - 2)");
  validate_fiber(fiber);
  Potential f = potentials::of_coordinate(
      profiles::affine(profiles::sinh(), kappa * A / (n - 1), kappa / (n - 1)), 0, n);
  MetricModel m = model_from_chart("cosh-warped", charts::warped(profiles::cosh(), {-2.0, 2.0}, fiber.chart, "t"),
                                   kappa, std::move(f), {"vstatic", "einstein", "warped-product"},
                                   -static_cast<double>(n) * (n - 1),
                                   {{"n", n}, {"A", A}, {"kappa", kappa}, {"fiber", fiber.fiber_name}});
  m.warping = profiles::cosh();
  if (!fiber.constant_curvature) m.tags.insert("conformally-curved");
  return m;
}

namespace detail {

inline MetricModel product_static(bool hyperbolic, int p, int q) {
  require(p >= 0, "p must be >= 0");
  require(q > 1, "q must be > 1");
  const double c = static_cast<double>(q - 1) / (p + 1);
  const DiagonalChart first = hyperbolic ? charts::hyperbolic_polar(p + 1) : charts::sphere_polar(p + 1);
  const DiagonalChart second =
      charts::scaled(hyperbolic ? charts::hyperbolic_polar(q) : charts::sphere_polar(q), c);
  const int n = p + 1 + q;
  Potential f = potentials::of_coordinate(hyperbolic ? profiles::cosh() : profiles::cos(), 0, n);
  // Ric = ∓p on the first block and ∓(p+1) on the second.
  const double R = (hyperbolic ? -1.0 : 1.0) * (static_cast<double>(p) * (p + 1) + static_cast<double>(p + 1) * q);
  return model_from_chart(hyperbolic ? "hyperbolic-product" : "sphere-product", charts::product(first, second), 0.0,
                          std::move(f), {"static-vacuum", "parallel-ricci"}, R, {{"p", p}, {"q", q}, {"kappa", 0.0}});
}

}  // namespace detail

/// H^{p+1} × ((q-1)/(p+1)) H^q, f = cosh r1, κ = 0.
inline MetricModel hyperbolic_product_static(int p, int q) { return detail::product_static(true, p, q); }

/// S^{p+1} × ((q-1)/(p+1)) S^q, f = cos r1, κ = 0.
inline MetricModel sphere_product_static(int p, int q) { return detail::product_static(false, p, q); }

/// Unit S² × S² (Einstein, Ric = g). The potential is a constant placeholder.
inline MetricModel s2xs2_model() {
  const DiagonalChart s2 = charts::round_sphere(2);
  return model_from_chart("s2xs2", charts::product(s2, s2), 0.0, potentials::constant(1.0, 4),
                          {"einstein", "parallel-ricci"}, 4.0, nlohmann::json::object());
}

/// dr² + φ(r)² g0 on r_interval with f = f_profile(r).
inline MetricModel generic_warped_model(int n, const Profile& phi, Interval r_interval, const WarpedFiberSpec& fiber,
                                        Profile f_profile, double kappa = 0.0,
                                        std::optional<double> expected_R = std::nullopt) {
  require(n >= 3, "n must be >= 3");
  require(fiber.fiber_dim() == n - 1, "fiber dimension must be n - 1");
  require(r_interval.hi > r_interval.lo, "warping interval must be nonempty");
  constexpr int kChecks = 2000;
  for (int k = 0; k <= kChecks; ++k) {
    const double r = r_interval.lo + r_interval.width() * k / kChecks;
    require(phi(r).value > 0.0, "warping function must be positive on the interval (phi <= 0 at r = " +
                                    std::to_string(r) + ")");
  }
  std::set<std::string> tags{"warped-product"};
  MetricModel m = model_from_chart("generic-warped", charts::warped(phi, r_interval, fiber.chart), kappa,
                                   potentials::of_coordinate(std::move(f_profile), 0, n), std::move(tags), expected_R,
                                   {{"n", n}, {"kappa", kappa}, {"fiber", fiber.fiber_name},
                                    {"r_min", r_interval.lo}, {"r_max", r_interval.hi}});
  m.warping = phi;
  return m;
}

/// Warped model whose φ is the quintic Hermite interpolant of an ODE trajectory.
inline MetricModel generic_warped_model(int n, const OdeTrajectory& traj, Interval r_interval,
                                        const WarpedFiberSpec& fiber, Profile f_profile, double kappa = 0.0) {
  const Interval range = traj.range();
  require(r_interval.lo >= range.lo && r_interval.hi <= range.hi, "warping interval exceeds the trajectory");
  require(traj.problem().n == n, "trajectory dimension differs from n");
  require(std::abs(traj.problem().lambda - fiber.einstein_constant) < 1e-12,
          "trajectory lambda differs from the fiber Einstein constant");
  MetricModel m = generic_warped_model(n, traj.profile(), r_interval, fiber, std::move(f_profile), kappa,
                                       traj.problem().scalar_curvature);
  m.parameters["R"] = traj.problem().scalar_curvature;
  m.parameters["lambda"] = traj.problem().lambda;
  return m;
}

/// dr² + cosh²r g_{S²} + (1 + r²/2)² g_{S²}, r in [0.3, 1.5], f = r.
/// Not Einstein, not conformally flat: a control for the Cotton routes.
inline MetricModel doubly_warped_control_model() {
  const DiagonalChart s2 = charts::round_sphere(2);
  const Profile b = profiles::affine(profiles::squared(profiles::identity()), 0.5, 1.0);
  return model_from_chart("doubly-warped", charts::doubly_warped(profiles::cosh(), b, {0.3, 1.5}, s2, s2), 0.0,
                          potentials::of_coordinate(profiles::identity(), 0, 5), {"control", "conformally-curved"}, std::nullopt,
                          {{"n", 5}, {"a", "cosh r"}, {"b", "1 + r^2/2"}});
}

/// dx² + cosh²x dy² + (1 + x²/2)² dz², x in [0.3, 1.5], y, z in [-1, 1], f = x. Not conformally flat.
inline MetricModel dim3_control_model() {
  const DiagonalChart line = charts::euclidean(1, {-1.0, 1.0});
  const Profile b = profiles::affine(profiles::squared(profiles::identity()), 0.5, 1.0);
  return model_from_chart("dim3-control", charts::doubly_warped(profiles::cosh(), b, {0.3, 1.5}, line, line), 0.0,
                          potentials::of_coordinate(profiles::identity(), 0, 3), {"control"}, std::nullopt,
                          {{"n", 3}, {"a", "cosh x"}, {"b", "1 + x^2/2"}});
}

/// Same metric, different potential. Drops the V-static tags.
inline MetricModel with_potential(MetricModel m, Potential f, const std::string& label) {
  m.potential = std::move(f);
  m.tags.erase("vstatic");
  m.tags.erase("static-vacuum");
  m.tags.insert("perturbed");
  m.warping.reset();
  m.name += "[" + label + "]";
  m.parameters["potential"] = label;
  return m;
}

/// hyperbolic_product_static(1, 3) with f = cosh r1 + 0.1 cosh ρ2, ρ2 the
/// radial coordinate of the second factor. Not static: the extra term is not
/// an eigenfunction of the block equations.
inline MetricModel perturbed_product_pair() {
  MetricModel base = hyperbolic_product_static(1, 3);
  Potential f = potentials::combine(base.potential, 1.0,
                                    potentials::of_coordinate(profiles::cosh(), 2, base.n), 0.1);
  return with_potential(std::move(base), std::move(f), "cosh r1 + 0.1 cosh rho2");
}

/// sphere_model with f multiplied by `factor`.
inline MetricModel scaled_potential_model(MetricModel m, double factor) {
  Potential f = potentials::scaled(m.potential, factor);
  return with_potential(std::move(m), std::move(f), "f x " + std::to_string(factor));
}

/// Round S^n with f = cos² r (not V-static).
inline MetricModel sphere_cos_squared_pair(int n) {
  MetricModel m = sphere_model(n, 1.0, 1.0);
  Potential f = potentials::of_coordinate(profiles::squared(profiles::cos()), 0, n);
  return with_potential(std::move(m), std::move(f), "cos^2 r");
}

/// Parameters accepted by model_by_name; unset fields take per-model defaults.
struct ModelParams {
  std::optional<int> n;
  std::optional<double> A;
  std::optional<double> kappa;
  std::optional<int> p;
  std::optional<int> q;
  std::optional<std::string> fiber;
};

inline const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names{"euclidean",     "sphere",        "hyperbolic",     "cosh-warped",
                                              "hyperbolic-product", "sphere-product", "s2xs2", "doubly-warped",
                                              "dim3-control",  "perturbed-product"};
  return names;
}

inline MetricModel model_by_name(const std::string& name, const ModelParams& prm) {
  const int n = prm.n.value_or(4);
  const double A = prm.A.value_or(1.0);
  const double kappa = prm.kappa.value_or(1.0);
  if (name == "euclidean") return euclidean_model(n, A, kappa);
  if (name == "sphere") return sphere_model(n, A, kappa);
  if (name == "hyperbolic") return hyperbolic_model(n, A, kappa);
  if (name == "cosh-warped") {
    require(n >= 3, "n must be >= 3");
    return cosh_warped_model(n, A, kappa, fibers::by_name(prm.fiber.value_or("hyperbolic"), n - 1));
  }
  if (name == "hyperbolic-product") return hyperbolic_product_static(prm.p.value_or(1), prm.q.value_or(3));
  if (name == "sphere-product") return sphere_product_static(prm.p.value_or(1), prm.q.value_or(3));
  if (name == "s2xs2") return s2xs2_model();
  if (name == "doubly-warped") return doubly_warped_control_model();
  if (name == "dim3-control") return dim3_control_model();
  if (name == "perturbed-product") return perturbed_product_pair();
  std::string known;
  for (const auto& k : model_names()) known += (known.empty() ? "" : ", ") + k;
  throw PreconditionError("unknown model '" + name + "' (" + known + ")");
}

}  // namespace vstatic
