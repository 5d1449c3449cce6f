#pragma once

// Warping-function ODE of warped V-static metrics dr² + φ(r)² g_Σ with an
// Einstein fiber Ric_Σ = λ g_Σ and constant scalar curvature R:
//
//   φ (R/(n-1) φ + 2 φ'') + (n-2) (φ')² = λ.
//
// Along solutions J = φ^(n-2) [ (φ')² - λ/(n-2) + R/(n(n-1)) φ² ] is constant.
// On a fixed level J = J0 the equation is equivalent to
//
//   φ'' = -R/(n(n-1)) φ - (n-2) J0 / (2 φ^(n-1)),
//
// which is regular at φ = 0 when J0 = 0 (smooth closure of the fiber).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "vstatic/chart.hpp"
#include "vstatic/errors.hpp"

namespace vstatic {

struct OdeProblem {
  int n = 4;
  double scalar_curvature = 0.0;
  double lambda = 2.0;
  double phi0 = 0.0;
  double dphi0 = 1.0;
  double r0 = 0.0;
  Interval span{0.0, 1.0};
  double step = 1e-3;

  bool singular_start() const { return phi0 == 0.0; }

  void validate() const {
    require(n >= 3, "n must be >= 3");
    require(step > 0.0 && std::isfinite(step), "step must be positive");
    require(span.hi > span.lo, "integration span must be nonempty");
    require(span.contains(r0), "initial point must lie in the integration span");
    require(std::isfinite(scalar_curvature) && std::isfinite(lambda) && std::isfinite(phi0) &&
                std::isfinite(dphi0),
            "ODE parameters must be finite");
    if (singular_start()) {
      require(dphi0 == 1.0,
              "singular start phi0 = 0 needs dphi0 = 1: the warped metric extends smoothly over "
              "the collapsing fiber only if phi'(0) = 1");
      require(std::abs(lambda - (n - 2)) <= 1e-12 * (n - 2),
              "singular start phi0 = 0 needs lambda = n - 2: smooth closure forces the fiber to "
              "be the unit round sphere");
      require(r0 == span.lo, "singular start must sit at the left end of the span");
    }
  }
};

/// φ(R/(n-1) φ + 2φ'') + (n-2)(φ')² - λ.
inline double ode_residual(const OdeProblem& prob, double /*r*/, double phi, double dphi,
                           double ddphi) {
  const double n = prob.n;
  return phi * (prob.scalar_curvature / (n - 1.0) * phi + 2.0 * ddphi) +
         (n - 2.0) * dphi * dphi - prob.lambda;
}

inline double first_integral(const OdeProblem& prob, double phi, double dphi) {
  const double n = prob.n;
  return std::pow(phi, n - 2.0) *
         (dphi * dphi - prob.lambda / (n - 2.0) + prob.scalar_curvature / (n * (n - 1.0)) * phi * phi);
}

struct OdeNode {
  double r = 0.0;
  double phi = 0.0;
  double dphi = 0.0;
  double ddphi = 0.0;
};

class OdeTrajectory {
 public:
  OdeTrajectory() = default;
  OdeTrajectory(OdeProblem problem, std::vector<OdeNode> nodes, std::vector<double> zeros)
      : problem_(problem), nodes_(std::move(nodes)), zeros_(std::move(zeros)) {
    require(!nodes_.empty(), "trajectory needs at least one node");
    for (const auto& nd : nodes_) first_integral_.push_back(vstatic::first_integral(problem_, nd.phi, nd.dphi));
  }

  const OdeProblem& problem() const { return problem_; }
  const std::vector<OdeNode>& nodes() const { return nodes_; }
  const std::vector<double>& first_integral() const { return first_integral_; }
  const std::vector<double>& zero_crossings() const { return zeros_; }
  Interval range() const { return {nodes_.front().r, nodes_.back().r}; }

  /// Largest |J(r) - J(r0)| over the nodes.
  double first_integral_drift() const {
    const double j0 = vstatic::first_integral(problem_, problem_.phi0, problem_.dphi0);
    double worst = 0.0;
    for (double j : first_integral_) worst = std::max(worst, std::abs(j - j0));
    return worst;
  }

  /// C² quintic Hermite interpolant through (φ, φ', φ'') at the nodes.
  ScalarJet at(double r) const {
    require(r >= nodes_.front().r && r <= nodes_.back().r, "r outside the trajectory range");
    if (nodes_.size() == 1) return {nodes_[0].phi, nodes_[0].dphi, nodes_[0].ddphi};
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r,
                               [](double x, const OdeNode& nd) { return x < nd.r; });
    std::size_t k = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
    k = std::min(k, nodes_.size() - 2);
    return quintic(nodes_[k], nodes_[k + 1], r);
  }

  Profile profile() const {
    return [self = *this](double r) { return self.at(r); };
  }

 private:
  static ScalarJet quintic(const OdeNode& a, const OdeNode& b, double r) {
    const double h = b.r - a.r;
    const double t = (r - a.r) / h;
    const double c0 = a.phi;
    const double c1 = h * a.dphi;
    const double c2 = 0.5 * h * h * a.ddphi;
    const double A = b.phi - c0 - c1 - c2;
    const double B = h * b.dphi - c1 - 2.0 * c2;
    const double C = h * h * b.ddphi - 2.0 * c2;
    const double c3 = 10.0 * A - 4.0 * B + 0.5 * C;
    const double c4 = -15.0 * A + 7.0 * B - C;
    const double c5 = 6.0 * A - 3.0 * B + 0.5 * C;
    const double v = c0 + t * (c1 + t * (c2 + t * (c3 + t * (c4 + t * c5))));
    const double d = c1 + t * (2.0 * c2 + t * (3.0 * c3 + t * (4.0 * c4 + t * 5.0 * c5)));
    const double dd = 2.0 * c2 + t * (6.0 * c3 + t * (12.0 * c4 + t * 20.0 * c5));
    return {v, d / h, dd / (h * h)};
  }

  OdeProblem problem_;
  std::vector<OdeNode> nodes_;
  std::vector<double> first_integral_;
  std::vector<double> zeros_;
};

namespace detail {

// Below this |φ| the level-set form of the equation replaces the division by φ.
inline constexpr double kRegularizeBelow = 0.25;

struct OdeRhs {
  const OdeProblem& prob;
  double level;  // J at the initial data

  double accel(double phi, double dphi) const {
    const double n = prob.n;
    const double R = prob.scalar_curvature;
    if (std::abs(phi) >= kRegularizeBelow)
      return (prob.lambda - (n - 2.0) * dphi * dphi - R / (n - 1.0) * phi * phi) / (2.0 * phi);
    const double omega = R / (n * (n - 1.0));
    double out = -omega * phi;
    if (level != 0.0) out -= 0.5 * (n - 2.0) * level / std::pow(phi, n - 1.0);
    return out;
  }
};

inline double hermite_cubic(const OdeNode& a, const OdeNode& b, double r) {
  const double h = b.r - a.r;
  const double t = (r - a.r) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * a.phi + (t3 - 2 * t2 + t) * h * a.dphi +
         (-2 * t3 + 3 * t2) * b.phi + (t3 - t2) * h * b.dphi;
}

inline double hermite_cubic_slope(const OdeNode& a, const OdeNode& b, double r) {
  const double h = b.r - a.r;
  const double t = (r - a.r) / h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * a.phi + (3 * t2 - 4 * t + 1) * h * a.dphi +
          (-6 * t2 + 6 * t) * b.phi + (3 * t2 - 2 * t) * h * b.dphi) / h;
}

// Integrates from the initial data towards `target` (either direction) with
// classical RK4. Stops at the first sign change of φ, which is refined by
// bisection on the cubic Hermite interpolant.
inline void integrate_direction(const OdeProblem& prob, const OdeRhs& rhs, double target,
                                std::vector<OdeNode>& nodes, std::vector<double>& zeros) {
  const double dir = target > prob.r0 ? 1.0 : -1.0;
  double r = prob.r0;
  double y = prob.phi0;
  double v = prob.dphi0;
  const double total = std::abs(target - prob.r0);
  const auto steps = static_cast<long>(std::ceil(total / prob.step - 1e-9));
  if (steps == 0) return;
  const double h = dir * total / static_cast<double>(steps);

  for (long s = 0; s < steps; ++s) {
    const double k1y = v;
    const double k1v = rhs.accel(y, v);
    const double k2y = v + 0.5 * h * k1v;
    const double k2v = rhs.accel(y + 0.5 * h * k1y, k2y);
    const double k3y = v + 0.5 * h * k2v;
    const double k3v = rhs.accel(y + 0.5 * h * k2y, k3y);
    const double k4y = v + h * k3v;
    const double k4v = rhs.accel(y + h * k3y, k4y);
    const double y1 = y + h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
    const double v1 = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    const double r1 = prob.r0 + static_cast<double>(s + 1) * h;

    if (!std::isfinite(y1) || !std::isfinite(v1))
      throw IntegrationError("phi -> 0- overshoot without sign-change bracket near r = " +
                             std::to_string(r));
    const bool crossed = (y > 0.0 && y1 <= 0.0) || (y < 0.0 && y1 >= 0.0);
    if (crossed) {
      OdeNode a{r, y, v, rhs.accel(y, v)};
      OdeNode b{r1, y1, v1, 0.0};
      if (dir < 0) std::swap(a, b);
      double lo = a.r;
      double hi = b.r;
      const double sign_lo = detail::hermite_cubic(a, b, lo) > 0.0 ? 1.0 : -1.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double val = detail::hermite_cubic(a, b, mid);
        if ((val > 0.0 ? 1.0 : -1.0) == sign_lo && val != 0.0)
          lo = mid;
        else
          hi = mid;
      }
      const double rz = 0.5 * (lo + hi);
      const double slope = detail::hermite_cubic_slope(a, b, rz);
      zeros.push_back(rz);
      nodes.push_back({rz, 0.0, slope, rhs.accel(0.0, slope)});
      return;
    }
    r = r1;
    y = y1;
    v = v1;
    nodes.push_back({r, y, v, rhs.accel(y, v)});
  }
}

}  // namespace detail

/// Fixed-step RK4 integration with zero-crossing detection. The trajectory
/// ends at the first zero of φ in each direction (the maximal interval of the
/// warped structure).
inline OdeTrajectory integrate(const OdeProblem& prob) {
  prob.validate();
  const double level = first_integral(prob, prob.phi0, prob.dphi0);
  const detail::OdeRhs rhs{prob, level};

  std::vector<double> zeros;
  std::vector<OdeNode> backward;
  std::vector<OdeNode> forward;
  if (prob.r0 > prob.span.lo) detail::integrate_direction(prob, rhs, prob.span.lo, backward, zeros);
  if (prob.singular_start()) zeros.push_back(prob.r0);
  if (prob.r0 < prob.span.hi) detail::integrate_direction(prob, rhs, prob.span.hi, forward, zeros);

  std::vector<OdeNode> nodes(backward.rbegin(), backward.rend());
  nodes.push_back({prob.r0, prob.phi0, prob.dphi0, rhs.accel(prob.phi0, prob.dphi0)});
  nodes.insert(nodes.end(), forward.begin(), forward.end());
  std::sort(zeros.begin(), zeros.end());
  return OdeTrajectory(prob, std::move(nodes), std::move(zeros));
}

/// Smooth-closure solution (λ = n - 2, φ(0) = 0, φ'(0) = 1) by sign of R.
inline Profile closed_form(double scalar_curvature, int n) {
  require(n >= 3, "n must be >= 3");
  const double nn = static_cast<double>(n) * (n - 1);
  if (scalar_curvature > 0.0) {
    const double a = std::sqrt(nn / scalar_curvature);
    return [a](double r) {
      return ScalarJet{a * std::sin(r / a), std::cos(r / a), -std::sin(r / a) / a};
    };
  }
  if (scalar_curvature < 0.0) {
    const double a = std::sqrt(-nn / scalar_curvature);
    return [a](double r) {
      return ScalarJet{a * std::sinh(r / a), std::cosh(r / a), std::sinh(r / a) / a};
    };
  }
  return profiles::identity();
}

enum class CaseLabel { Sphere, Euclidean, Hyperbolic, GenericWarped, Inconsistent };

inline std::string to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::Sphere: return "Sphere";
    case CaseLabel::Euclidean: return "Euclidean";
    case CaseLabel::Hyperbolic: return "Hyperbolic";
    case CaseLabel::GenericWarped: return "GenericWarped";
    case CaseLabel::Inconsistent: return "Inconsistent";
  }
  return "Inconsistent";
}

/// Case table by number of zeros of φ and sign of R: two zeros close up a
/// sphere (R > 0 only), one zero gives R^n (R = 0) or H^n (R < 0), none gives
/// a warped product over the whole line.
inline CaseLabel classify_zero_count(double scalar_curvature, std::size_t zeros) {
  constexpr double kFlat = 1e-12;
  if (zeros >= 2) return scalar_curvature > kFlat ? CaseLabel::Sphere : CaseLabel::Inconsistent;
  if (zeros == 1) {
    if (std::abs(scalar_curvature) <= kFlat) return CaseLabel::Euclidean;
    return scalar_curvature < 0.0 ? CaseLabel::Hyperbolic : CaseLabel::Inconsistent;
  }
  return CaseLabel::GenericWarped;
}

inline CaseLabel classify(const OdeProblem& prob, const OdeTrajectory& traj) {
  return classify_zero_count(prob.scalar_curvature, traj.zero_crossings().size());
}

/// The warping equation in the specialised forms for n = 4 (λ = 2, divided
/// by 2) and n = 3 (λ = 1).
struct SpecialCaseOde {
  OdeProblem problem;
  double proportionality = 1.0;  // general residual = proportionality * special residual
  std::function<double(double R, double phi, double dphi, double ddphi)> residual;
  std::string form;
};

inline SpecialCaseOde special_case_odes(int n) {
  SpecialCaseOde out;
  out.problem.n = n;
  if (n == 4) {
    out.problem.lambda = 2.0;
    out.proportionality = 2.0;
    out.residual = [](double R, double phi, double dphi, double ddphi) {
      return phi * (ddphi + R / 6.0 * phi) + dphi * dphi - 1.0;
    };
    out.form = "phi*(phi'' + R/6*phi) + (phi')^2 = 1";
    return out;
  }
  if (n == 3) {
    out.problem.lambda = 1.0;
    out.proportionality = 1.0;
    out.residual = [](double R, double phi, double dphi, double ddphi) {
      return phi * (2.0 * ddphi + R / 2.0 * phi) + dphi * dphi - 1.0;
    };
    out.form = "phi*(2*phi'' + R/2*phi) + (phi')^2 = 1";
    return out;
  }
  throw PreconditionError("special-case warping ODEs exist only for n = 3 and n = 4");
}

/// CSV with header r,phi,dphi,J and %.17g fields.
inline void write_csv(std::ostream& os, const OdeTrajectory& traj) {
  os << "r,phi,dphi,J\n";
  char buf[128];
  for (std::size_t k = 0; k < traj.nodes().size(); ++k) {
    const auto& nd = traj.nodes()[k];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", nd.r, nd.phi, nd.dphi,
                  traj.first_integral()[k]);
    os << buf;
  }
}

}  // namespace vstatic
