#pragma once

// Central finite differences with Richardson extrapolation, applied
// componentwise to tensor-valued fields on a coordinate box.

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vstatic/errors.hpp"
#include "vstatic/tensor.hpp"

namespace vstatic {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// How coordinate derivatives are taken.
///
/// Metric derivatives of order one and two come from the model when it
/// supplies them (`use_analytic`), otherwise from central differences. Every
/// further derivative (covariant derivatives of curvature) is a central
/// difference of order `scheme` with `richardson_levels` extrapolation levels.
/// Nested differences use step `base_step * depth_growth^depth`.
struct DerivativePlan {
  int scheme = 4;
  double base_step = 4e-3;
  int richardson_levels = 2;
  double depth_growth = 4.0;
  std::array<bool, 2> use_analytic{true, true};

  void validate() const {
    require(scheme == 2 || scheme == 4 || scheme == 6, "scheme must be 2, 4 or 6");
    require(base_step > 0.0 && std::isfinite(base_step), "step must be positive");
    require(richardson_levels >= 1 && richardson_levels <= 4, "richardson_levels must lie in [1, 4]");
    require(depth_growth >= 1.0, "depth_growth must be >= 1");
  }

  double step(int depth) const { return base_step * std::pow(depth_growth, depth); }

  /// Largest coordinate offset of one difference at the given depth.
  double reach(int depth) const { return 0.5 * scheme * step(depth); }

  /// Total reach of `levels` nested differences, starting at depth 0.
  double nested_reach(int levels) const {
    double r = 0.0;
    for (int d = 0; d < levels; ++d) r += reach(d);
    return r;
  }
};

namespace detail {

struct Stencil {
  std::vector<int> offsets;
  std::vector<double> weights;
};

inline const Stencil& central_first_derivative(int order) {
  static const Stencil s2{{-1, 1}, {-0.5, 0.5}};
  static const Stencil s4{{-2, -1, 1, 2}, {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12}};
  static const Stencil s6{{-3, -2, -1, 1, 2, 3},
                          {-1.0 / 60, 9.0 / 60, -45.0 / 60, 45.0 / 60, -9.0 / 60, 1.0 / 60}};
  return order == 2 ? s2 : order == 4 ? s4 : s6;
}

}  // namespace detail

using TensorField = std::function<Tensor(const Point&)>;

/// Throws StencilError unless p +- reach stays inside the box along `axis`.
inline void check_stencil(std::span<const Interval> domain, const Point& p, int axis, double reach) {
  const Interval& iv = domain[static_cast<std::size_t>(axis)];
  if (p[static_cast<std::size_t>(axis)] - reach < iv.lo ||
      p[static_cast<std::size_t>(axis)] + reach > iv.hi)
    throw StencilError("point too close to domain boundary for the stencil (axis " +
                       std::to_string(axis) + ")");
}

/// Partial derivative of every component of `field` along `axis`.
inline Tensor partial_derivative(const TensorField& field, std::span<const Interval> domain,
                                 const Point& p, int axis, const DerivativePlan& plan,
                                 int depth = 0) {
  const double h0 = plan.step(depth);
  check_stencil(domain, p, axis, plan.reach(depth));
  const auto& st = detail::central_first_derivative(plan.scheme);

  auto estimate = [&](double h) {
    Tensor acc;
    for (std::size_t k = 0; k < st.offsets.size(); ++k) {
      Tensor v = field(p.shifted(axis, st.offsets[k] * h));
      if (k == 0) {
        acc = v * (st.weights[k] / h);
      } else {
        auto a = acc.data();
        const auto b = v.data();
        const double w = st.weights[k] / h;
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += w * b[i];
      }
    }
    return acc;
  };

  // Richardson table: error expansion of a central difference of order p has
  // powers p, p + 2, p + 4, ...
  std::vector<Tensor> row;
  for (int level = 0; level < plan.richardson_levels; ++level) {
    std::vector<Tensor> next;
    next.push_back(estimate(h0 / std::pow(2.0, level)));
    for (std::size_t j = 1; j <= row.size(); ++j) {
      const double factor = std::pow(2.0, plan.scheme + 2.0 * static_cast<double>(j - 1)) - 1.0;
      Tensor improved = next[j - 1];
      auto a = improved.data();
      const auto fine = next[j - 1].data();
      const auto coarse = row[j - 1].data();
      for (std::size_t i = 0; i < a.size(); ++i) a[i] = fine[i] + (fine[i] - coarse[i]) / factor;
      next.push_back(std::move(improved));
    }
    row = std::move(next);
  }
  return row.back();
}

/// All partial derivatives; slot 0 of the result is the derivative index.
inline Tensor gradient_components(const TensorField& field, std::span<const Interval> domain,
                                  const Point& p, const DerivativePlan& plan, int depth = 0) {
  const int n = p.dim();
  Tensor out;
  for (int axis = 0; axis < n; ++axis) {
    Tensor d = partial_derivative(field, domain, p, axis, plan, depth);
    if (axis == 0) {
      std::vector<Variance> variance{Variance::lower};
      variance.insert(variance.end(), d.variance().begin(), d.variance().end());
      out = Tensor(n, std::move(variance));
    }
    auto dst = out.data();
    const auto src = d.data();
    std::copy(src.begin(), src.end(), dst.begin() + static_cast<std::ptrdiff_t>(axis * src.size()));
  }
  return out;
}

}  // namespace vstatic
