#pragma once

// Diagonal metrics whose entries are products of one-variable profiles,
//   g_ii(x) = c_i * prod_k F_ik(x_{a_ik}),
// with closed-form first and second coordinate derivatives. Every chart in
// the model catalog (polar space forms, warped and Riemannian products) has
// this shape.

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "vstatic/errors.hpp"
#include "vstatic/finite_difference.hpp"
#include "vstatic/tensor.hpp"

namespace vstatic {

/// Value and first two derivatives of a function of one variable.
struct ScalarJet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

using Profile = std::function<ScalarJet(double)>;

namespace profiles {

inline Profile constant(double c) {
  return [c](double) { return ScalarJet{c, 0.0, 0.0}; };
}
inline Profile identity() {
  return [](double x) { return ScalarJet{x, 1.0, 0.0}; };
}
inline Profile sin() {
  return [](double x) { return ScalarJet{std::sin(x), std::cos(x), -std::sin(x)}; };
}
inline Profile cos() {
  return [](double x) { return ScalarJet{std::cos(x), -std::sin(x), -std::cos(x)}; };
}
inline Profile sinh() {
  return [](double x) { return ScalarJet{std::sinh(x), std::cosh(x), std::sinh(x)}; };
}
inline Profile cosh() {
  return [](double x) { return ScalarJet{std::cosh(x), std::sinh(x), std::cosh(x)}; };
}

/// x -> s * p(x) + t.
inline Profile affine(Profile p, double s, double t) {
  return [p = std::move(p), s, t](double x) {
    const ScalarJet j = p(x);
    return ScalarJet{s * j.value + t, s * j.d1, s * j.d2};
  };
}

/// x -> p(x)^2.
inline Profile squared(Profile p) {
  return [p = std::move(p)](double x) {
    const ScalarJet j = p(x);
    return ScalarJet{j.value * j.value, 2.0 * j.value * j.d1, 2.0 * (j.d1 * j.d1 + j.value * j.d2)};
  };
}

/// x -> p(x) * q(x).
inline Profile product(Profile p, Profile q) {
  return [p = std::move(p), q = std::move(q)](double x) {
    const ScalarJet a = p(x);
    const ScalarJet b = q(x);
    return ScalarJet{a.value * b.value, a.d1 * b.value + a.value * b.d1,
                     a.d2 * b.value + 2.0 * a.d1 * b.d1 + a.value * b.d2};
  };
}

}  // namespace profiles

struct DiagonalFactor {
  int coord = 0;
  Profile profile;
};

struct DiagonalEntry {
  double scale = 1.0;
  std::vector<DiagonalFactor> factors;
};

/// First and second coordinate derivatives of the metric:
/// dg(k, i, j) = d_k g_ij and ddg(k, l, i, j) = d_k d_l g_ij.
struct MetricDerivatives {
  Tensor dg;
  Tensor ddg;
};

class DiagonalChart {
 public:
  DiagonalChart() = default;
  DiagonalChart(std::vector<Interval> domain, std::vector<DiagonalEntry> entries,
                std::vector<std::string> coord_names)
      : domain_(std::move(domain)), entries_(std::move(entries)), names_(std::move(coord_names)) {
    require(domain_.size() == entries_.size() && names_.size() == entries_.size(),
            "chart domain, entries and names must have equal length");
    for (const auto& e : entries_)
      for (const auto& f : e.factors)
        require(f.coord >= 0 && f.coord < dim(), "diagonal factor refers to a missing coordinate");
  }

  int dim() const { return static_cast<int>(entries_.size()); }
  const std::vector<Interval>& domain() const { return domain_; }
  const std::vector<DiagonalEntry>& entries() const { return entries_; }
  const std::vector<std::string>& coord_names() const { return names_; }

  Eigen::MatrixXd metric(const Point& p) const {
    const int n = dim();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      const auto& e = entries_[static_cast<std::size_t>(i)];
      double v = e.scale;
      for (const auto& f : e.factors) v *= f.profile(p[static_cast<std::size_t>(f.coord)]).value;
      g(i, i) = v;
    }
    return g;
  }

  MetricDerivatives derivatives(const Point& p) const {
    const int n = dim();
    MetricDerivatives out{Tensor::zeros(n, 3), Tensor::zeros(n, 4)};
    for (int i = 0; i < n; ++i) {
      const auto& e = entries_[static_cast<std::size_t>(i)];
      const std::size_t m = e.factors.size();
      std::vector<ScalarJet> jets(m);
      for (std::size_t k = 0; k < m; ++k)
        jets[k] = e.factors[k].profile(p[static_cast<std::size_t>(e.factors[k].coord)]);
      auto product_except = [&](std::size_t a, std::size_t b) {
        double v = e.scale;
        for (std::size_t k = 0; k < m; ++k)
          if (k != a && k != b) v *= jets[k].value;
        return v;
      };
      for (std::size_t k = 0; k < m; ++k) {
        const int a = e.factors[k].coord;
        const double rest = product_except(k, k);
        out.dg(a, i, i) += jets[k].d1 * rest;
        out.ddg(a, a, i, i) += jets[k].d2 * rest;
        for (std::size_t l = 0; l < m; ++l) {
          if (l == k) continue;
          const int b = e.factors[l].coord;
          out.ddg(a, b, i, i) += jets[k].d1 * jets[l].d1 * product_except(k, l);
        }
      }
    }
    return out;
  }

 private:
  std::vector<Interval> domain_;
  std::vector<DiagonalEntry> entries_;
  std::vector<std::string> names_;
};

/// Chart building blocks. Angular coordinates keep 0.2 away from the poles.
namespace charts {

inline constexpr double kPoleMargin = 0.2;

inline DiagonalChart euclidean(int m, Interval box) {
  std::vector<Interval> domain(static_cast<std::size_t>(m), box);
  std::vector<DiagonalEntry> entries(static_cast<std::size_t>(m));
  std::vector<std::string> names;
  for (int i = 0; i < m; ++i) names.push_back("x" + std::to_string(i + 1));
  return DiagonalChart(std::move(domain), std::move(entries), std::move(names));
}

/// Unit round S^m in hyperspherical angles: g = dθ1² + sin²θ1 dθ2² + ...
inline DiagonalChart round_sphere(int m) {
  require(m >= 0, "sphere dimension must be non-negative");
  const double pi = std::numbers::pi;
  std::vector<Interval> domain;
  std::vector<DiagonalEntry> entries;
  std::vector<std::string> names;
  for (int i = 0; i < m; ++i) {
    const bool azimuth = i == m - 1;
    domain.push_back(azimuth ? Interval{kPoleMargin, 2.0 * pi - kPoleMargin}
                             : Interval{kPoleMargin, pi - kPoleMargin});
    DiagonalEntry e;
    for (int j = 0; j < i; ++j) e.factors.push_back({j, profiles::squared(profiles::sin())});
    entries.push_back(std::move(e));
    names.push_back("theta" + std::to_string(i + 1));
  }
  return DiagonalChart(std::move(domain), std::move(entries), std::move(names));
}

/// dr² + φ(r)² g_fiber on interval × fiber domain.
inline DiagonalChart warped(const Profile& phi, Interval r, const DiagonalChart& fiber,
                            std::string r_name = "r") {
  std::vector<Interval> domain{r};
  std::vector<DiagonalEntry> entries{DiagonalEntry{}};
  std::vector<std::string> names{std::move(r_name)};
  const Profile phi_sq = profiles::squared(phi);
  for (int i = 0; i < fiber.dim(); ++i) {
    domain.push_back(fiber.domain()[static_cast<std::size_t>(i)]);
    DiagonalEntry e{fiber.entries()[static_cast<std::size_t>(i)].scale, {{0, phi_sq}}};
    for (const auto& f : fiber.entries()[static_cast<std::size_t>(i)].factors)
      e.factors.push_back({f.coord + 1, f.profile});
    entries.push_back(std::move(e));
    names.push_back(fiber.coord_names()[static_cast<std::size_t>(i)]);
  }
  return DiagonalChart(std::move(domain), std::move(entries), std::move(names));
}

/// dr² + a(r)² g_p + b(r)² g_q.
inline DiagonalChart doubly_warped(const Profile& a, const Profile& b, Interval r, const DiagonalChart& p,
                                   const DiagonalChart& q) {
  DiagonalChart base = warped(a, r, p);
  std::vector<Interval> domain = base.domain();
  std::vector<DiagonalEntry> entries = base.entries();
  std::vector<std::string> names = base.coord_names();
  const Profile b_sq = profiles::squared(b);
  const int shift = 1 + p.dim();
  for (int i = 0; i < q.dim(); ++i) {
    domain.push_back(q.domain()[static_cast<std::size_t>(i)]);
    DiagonalEntry e{q.entries()[static_cast<std::size_t>(i)].scale, {{0, b_sq}}};
    for (const auto& f : q.entries()[static_cast<std::size_t>(i)].factors)
      e.factors.push_back({f.coord + shift, f.profile});
    entries.push_back(std::move(e));
    names.push_back(q.coord_names()[static_cast<std::size_t>(i)] + "'");
  }
  return DiagonalChart(std::move(domain), std::move(entries), std::move(names));
}

/// Riemannian product a × b.
inline DiagonalChart product(const DiagonalChart& a, const DiagonalChart& b) {
  std::vector<Interval> domain = a.domain();
  std::vector<DiagonalEntry> entries = a.entries();
  std::vector<std::string> names = a.coord_names();
  for (int i = 0; i < b.dim(); ++i) {
    domain.push_back(b.domain()[static_cast<std::size_t>(i)]);
    DiagonalEntry e{b.entries()[static_cast<std::size_t>(i)].scale, {}};
    for (const auto& f : b.entries()[static_cast<std::size_t>(i)].factors)
      e.factors.push_back({f.coord + a.dim(), f.profile});
    entries.push_back(std::move(e));
    names.push_back(b.coord_names()[static_cast<std::size_t>(i)] + "'");
  }
  return DiagonalChart(std::move(domain), std::move(entries), std::move(names));
}

/// c · g.
inline DiagonalChart scaled(const DiagonalChart& chart, double c) {
  require(c > 0.0, "metric scale must be positive");
  std::vector<DiagonalEntry> entries = chart.entries();
  for (auto& e : entries) e.scale *= c;
  return DiagonalChart(chart.domain(), std::move(entries), chart.coord_names());
}

/// Unit S^m in geodesic polar coordinates about a point.
inline DiagonalChart sphere_polar(int m) {
  const double pi = std::numbers::pi;
  return warped(profiles::sin(), {kPoleMargin, pi - kPoleMargin}, round_sphere(m - 1));
}

/// H^m (curvature -1) in geodesic polar coordinates, r in [0.2, r_max].
inline DiagonalChart hyperbolic_polar(int m, double r_max = 3.0) {
  return warped(profiles::sinh(), {kPoleMargin, r_max}, round_sphere(m - 1));
}

}  // namespace charts

}  // namespace vstatic
