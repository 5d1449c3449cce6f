#pragma once

// Pointwise tensor algebra on a single coordinate chart. Components are
// stored densely in row-major order: slot 0 is the slowest-varying index.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vstatic/errors.hpp"

namespace vstatic {

inline constexpr int kMaxDim = 8;

/// Coordinates of a point in a chart.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords) : coords_(std::move(coords)) {
    require(coords_.size() >= 1 && coords_.size() <= kMaxDim,
            "point dimension must lie in [1, 8]");
    for (double c : coords_)
      require(std::isfinite(c), "point coordinates must be finite");
  }
  Point(std::initializer_list<double> coords)
      : Point(std::vector<double>(coords)) {}

  int dim() const { return static_cast<int>(coords_.size()); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const { return coords_; }

  Point shifted(int axis, double delta) const {
    Point out = *this;
    out.coords_[static_cast<std::size_t>(axis)] += delta;
    return out;
  }

 private:
  std::vector<double> coords_;
};

/// Metric components at a point together with the inverse and determinant.
class MetricAtPoint {
 public:
  MetricAtPoint() = default;
  explicit MetricAtPoint(Eigen::MatrixXd g) : g_(std::move(g)) {
    require(g_.rows() == g_.cols() && g_.rows() >= 1, "metric must be square");
    const double scale = g_.cwiseAbs().maxCoeff();
    require((g_ - g_.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
            "metric must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(g_);
    require(llt.info() == Eigen::Success && scale > 0.0 && g_.allFinite(),
            "metric must be positive definite");
    inverse_ = llt.solve(Eigen::MatrixXd::Identity(g_.rows(), g_.cols()));
    inverse_ = 0.5 * (inverse_ + inverse_.transpose());
    const Eigen::MatrixXd L = llt.matrixL();
    det_ = L.diagonal().prod();
    det_ *= det_;
  }

  int dim() const { return static_cast<int>(g_.rows()); }
  const Eigen::MatrixXd& g() const { return g_; }
  const Eigen::MatrixXd& inverse() const { return inverse_; }
  double g(int i, int j) const { return g_(i, j); }
  double inv(int i, int j) const { return inverse_(i, j); }
  double det() const { return det_; }

  /// Largest entry of |g g^{-1} - I|.
  double inverse_defect() const {
    const auto n = g_.rows();
    return (g_ * inverse_ - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  }

 private:
  Eigen::MatrixXd g_;
  Eigen::MatrixXd inverse_;
  double det_ = 0.0;
};

enum class Variance : std::uint8_t { lower, upper };
enum class Symmetry : std::uint8_t { none, symmetric_pair, skew_pair, riemann_type };
enum class IndexMove : std::uint8_t { up, down };

namespace detail {

inline std::size_t ipow(int base, int exp) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) out *= static_cast<std::size_t>(base);
  return out;
}

}  // namespace detail

/// Coordinate components of a tensor at a point.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int dim, std::vector<Variance> variance, Symmetry symmetry = Symmetry::none)
      : dim_(dim), variance_(std::move(variance)), symmetry_(symmetry) {
    require(dim >= 1 && dim <= kMaxDim, "tensor dimension must lie in [1, 8]");
    data_.assign(detail::ipow(dim_, rank()), 0.0);
    check_symmetry_rank();
  }

  static Tensor zeros(int dim, int rank, Symmetry symmetry = Symmetry::none) {
    return Tensor(dim, std::vector<Variance>(static_cast<std::size_t>(rank), Variance::lower),
                  symmetry);
  }
  static Tensor scalar(int dim, double value) {
    Tensor t = zeros(dim, 0);
    t.data_[0] = value;
    return t;
  }
  static Tensor from_matrix(const Eigen::MatrixXd& m, Symmetry symmetry = Symmetry::none) {
    Tensor t = zeros(static_cast<int>(m.rows()), 2, symmetry);
    for (int i = 0; i < t.dim_; ++i)
      for (int j = 0; j < t.dim_; ++j) t(i, j) = m(i, j);
    return t;
  }
  static Tensor covector(std::span<const double> components) {
    Tensor t = zeros(static_cast<int>(components.size()), 1);
    std::copy(components.begin(), components.end(), t.data_.begin());
    return t;
  }

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(variance_.size()); }
  std::size_t size() const { return data_.size(); }
  const std::vector<Variance>& variance() const { return variance_; }
  Variance variance(int slot) const { return variance_[static_cast<std::size_t>(slot)]; }
  Symmetry symmetry() const { return symmetry_; }
  void declare_symmetry(Symmetry s) {
    symmetry_ = s;
    check_symmetry_rank();
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  std::size_t stride(int slot) const { return detail::ipow(dim_, rank() - 1 - slot); }

  template <typename... I>
  double& operator()(I... idx) {
    return data_[flat(idx...)];
  }
  template <typename... I>
  double operator()(I... idx) const {
    return data_[flat(idx...)];
  }
  double value() const { return data_.at(0); }

  bool same_shape(const Tensor& o) const {
    return dim_ == o.dim_ && variance_ == o.variance_;
  }

  Tensor& operator+=(const Tensor& o) {
    require(same_shape(o), "tensor shape mismatch in addition");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    if (symmetry_ != o.symmetry_) symmetry_ = Symmetry::none;
    return *this;
  }
  Tensor& operator-=(const Tensor& o) {
    require(same_shape(o), "tensor shape mismatch in subtraction");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    if (symmetry_ != o.symmetry_) symmetry_ = Symmetry::none;
    return *this;
  }
  Tensor& operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
  }
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(Tensor a, double s) { return a *= s; }
  friend Tensor operator*(double s, Tensor a) { return a *= s; }

  double max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

 private:
  template <typename... I>
  std::size_t flat(I... idx) const {
    std::size_t f = 0;
    ((f = f * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(idx)), ...);
    return f;
  }

  void check_symmetry_rank() const {
    if (symmetry_ == Symmetry::symmetric_pair || symmetry_ == Symmetry::skew_pair)
      require(rank() >= 2, "pair symmetry needs rank >= 2");
    if (symmetry_ == Symmetry::riemann_type)
      require(rank() == 4, "riemann-type symmetry needs rank 4");
  }

  int dim_ = 0;
  std::vector<Variance> variance_;
  Symmetry symmetry_ = Symmetry::none;
  std::vector<double> data_;
};

/// Covariant metric components as a rank-2 tensor.
inline Tensor metric_tensor(const MetricAtPoint& m) {
  return Tensor::from_matrix(m.g(), Symmetry::symmetric_pair);
}

namespace detail {

// Swap of slots 0 and 1 for every trailing index block.
template <typename Fn>
void for_each_pair01(const Tensor& t, Fn&& fn) {
  const int n = t.dim();
  const std::size_t tail = t.stride(1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (std::size_t r = 0; r < tail; ++r)
        fn((static_cast<std::size_t>(i) * n + j) * tail + r,
           (static_cast<std::size_t>(j) * n + i) * tail + r);
}

inline std::size_t idx4(int n, int i, int j, int k, int l) {
  return ((static_cast<std::size_t>(i) * n + j) * n + k) * n + l;
}

}  // namespace detail

/// Largest violation of the first Bianchi identity Z_ijkl + Z_jkil + Z_kijl = 0.
inline double first_bianchi_defect(const Tensor& z) {
  require(z.rank() == 4, "first Bianchi check needs rank 4");
  const int n = z.dim();
  const auto d = z.data();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          worst = std::max(worst, std::abs(d[detail::idx4(n, i, j, k, l)] +
                                           d[detail::idx4(n, j, k, i, l)] +
                                           d[detail::idx4(n, k, i, j, l)]));
  return worst;
}

/// Largest violation of the declared symmetry class.
inline double symmetry_defect(const Tensor& t) {
  const auto d = t.data();
  double worst = 0.0;
  switch (t.symmetry()) {
    case Symmetry::none:
      return 0.0;
    case Symmetry::symmetric_pair:
      detail::for_each_pair01(t, [&](std::size_t a, std::size_t b) {
        worst = std::max(worst, std::abs(d[a] - d[b]));
      });
      return worst;
    case Symmetry::skew_pair:
      detail::for_each_pair01(t, [&](std::size_t a, std::size_t b) {
        worst = std::max(worst, std::abs(d[a] + d[b]));
      });
      return worst;
    case Symmetry::riemann_type: {
      const int n = t.dim();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              const double v = d[detail::idx4(n, i, j, k, l)];
              worst = std::max({worst, std::abs(v + d[detail::idx4(n, j, i, k, l)]),
                                std::abs(v + d[detail::idx4(n, i, j, l, k)]),
                                std::abs(v - d[detail::idx4(n, k, l, i, j)])});
            }
      return std::max(worst, first_bianchi_defect(t));
    }
  }
  return worst;
}

/// Projects the components onto the given symmetry class and declares it.
inline Tensor enforce_symmetry(Tensor t, Symmetry s) {
  t.declare_symmetry(s);
  auto d = t.data();
  switch (s) {
    case Symmetry::none:
      break;
    case Symmetry::symmetric_pair:
      detail::for_each_pair01(t, [&](std::size_t a, std::size_t b) {
        if (a < b) d[a] = d[b] = 0.5 * (d[a] + d[b]);
      });
      break;
    case Symmetry::skew_pair:
      detail::for_each_pair01(t, [&](std::size_t a, std::size_t b) {
        if (a == b) {
          d[a] = 0.0;
        } else if (a < b) {
          const double v = 0.5 * (d[a] - d[b]);
          d[a] = v;
          d[b] = -v;
        }
      });
      break;
    case Symmetry::riemann_type: {
      const int n = t.dim();
      std::vector<double> src(d.begin(), d.end());
      std::vector<double> skewed(src.size());
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              auto at = [&](int a, int b, int c, int e) {
                return src[detail::idx4(n, a, b, c, e)];
              };
              const double lhs = at(i, j, k, l) - at(j, i, k, l) - at(i, j, l, k) + at(j, i, l, k);
              const double rhs = at(k, l, i, j) - at(l, k, i, j) - at(k, l, j, i) + at(l, k, j, i);
              skewed[detail::idx4(n, i, j, k, l)] = 0.125 * (lhs + rhs);
            }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              const double cyclic = skewed[detail::idx4(n, i, j, k, l)] +
                                    skewed[detail::idx4(n, j, k, i, l)] +
                                    skewed[detail::idx4(n, k, i, j, l)];
              d[detail::idx4(n, i, j, k, l)] =
                  skewed[detail::idx4(n, i, j, k, l)] - cyclic / 3.0;
            }
      break;
    }
  }
  return t;
}

/// Flips the variance of one slot using the metric (up: g^{ab}, down: g_{ab}).
inline Tensor raise_lower(const Tensor& t, int slot, const MetricAtPoint& m, IndexMove move) {
  require(slot >= 0 && slot < t.rank(), "slot out of range");
  require(m.dim() == t.dim(), "metric and tensor dimensions differ");
  const Variance from = move == IndexMove::up ? Variance::lower : Variance::upper;
  require(t.variance(slot) == from, "slot variance does not match the requested move");
  require(std::isfinite(m.det()) && m.det() > 0.0 && m.inverse_defect() < 1e-8,
          "metric is not invertible");
  const Eigen::MatrixXd& G = move == IndexMove::up ? m.inverse() : m.g();

  auto variance = t.variance();
  variance[static_cast<std::size_t>(slot)] =
      move == IndexMove::up ? Variance::upper : Variance::lower;
  Tensor out(t.dim(), std::move(variance));
  const int n = t.dim();
  const std::size_t st = t.stride(slot);
  const auto src = t.data();
  auto dst = out.data();
  for (std::size_t f = 0; f < dst.size(); ++f) {
    const int a = static_cast<int>((f / st) % static_cast<std::size_t>(n));
    const std::size_t base = f - static_cast<std::size_t>(a) * st;
    double s = 0.0;
    for (int b = 0; b < n; ++b) s += G(a, b) * src[base + static_cast<std::size_t>(b) * st];
    dst[f] = s;
  }
  return out;
}

/// Flips every slot's variance.
inline Tensor flip_all(const Tensor& t, const MetricAtPoint& m) {
  Tensor out = t;
  for (int s = 0; s < t.rank(); ++s)
    out = raise_lower(out, s, m,
                      out.variance(s) == Variance::lower ? IndexMove::up : IndexMove::down);
  return out;
}

/// Metric inner product <a, b> over all slots.
inline double inner(const Tensor& a, const Tensor& b, const MetricAtPoint& m) {
  require(a.same_shape(b), "inner product needs tensors of equal shape");
  const Tensor bf = flip_all(b, m);
  const auto x = a.data();
  const auto y = bf.data();
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

/// |t|^2 = t_{a...} t^{a...}.
inline double full_norm_sq(const Tensor& t, const MetricAtPoint& m) {
  return std::max(0.0, inner(t, t, m));
}

inline double norm(const Tensor& t, const MetricAtPoint& m) {
  return std::sqrt(full_norm_sq(t, m));
}

/// Contracts slots a and b, using g^{-1} for two lower slots, g for two upper
/// slots and the plain trace for a mixed pair.
inline Tensor contract(const Tensor& t, int a, int b, const MetricAtPoint& m) {
  require(a != b && a >= 0 && b >= 0 && a < t.rank() && b < t.rank(), "bad contraction slots");
  if (a > b) std::swap(a, b);
  const int n = t.dim();
  Eigen::MatrixXd G;
  if (t.variance(a) == Variance::lower && t.variance(b) == Variance::lower)
    G = m.inverse();
  else if (t.variance(a) == Variance::upper && t.variance(b) == Variance::upper)
    G = m.g();
  else
    G = Eigen::MatrixXd::Identity(n, n);

  std::vector<Variance> variance;
  for (int s = 0; s < t.rank(); ++s)
    if (s != a && s != b) variance.push_back(t.variance(s));
  Tensor out(n, std::move(variance));
  const int out_rank = out.rank();
  const std::size_t sa = t.stride(a);
  const std::size_t sb = t.stride(b);
  const auto src = t.data();
  auto dst = out.data();
  std::vector<int> digits(static_cast<std::size_t>(out_rank));
  for (std::size_t f = 0; f < dst.size(); ++f) {
    std::size_t rem = f;
    for (int s = out_rank - 1; s >= 0; --s) {
      digits[static_cast<std::size_t>(s)] = static_cast<int>(rem % static_cast<std::size_t>(n));
      rem /= static_cast<std::size_t>(n);
    }
    std::size_t base = 0;
    for (int s = 0, o = 0; s < t.rank(); ++s) {
      const int digit = (s == a || s == b) ? 0 : digits[static_cast<std::size_t>(o++)];
      base = base * static_cast<std::size_t>(n) + static_cast<std::size_t>(digit);
    }
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double w = G(i, j);
        if (w != 0.0) sum += w * src[base + static_cast<std::size_t>(i) * sa +
                                     static_cast<std::size_t>(j) * sb];
      }
    dst[f] = sum;
  }
  return out;
}

/// Inserts a contravariant vector into one (lower) slot: t(..., v, ...).
inline Tensor apply_vector(const Tensor& t, int slot, std::span<const double> v) {
  require(slot >= 0 && slot < t.rank(), "slot out of range");
  require(static_cast<int>(v.size()) == t.dim(), "vector dimension mismatch");
  const int n = t.dim();
  std::vector<Variance> variance;
  for (int s = 0; s < t.rank(); ++s)
    if (s != slot) variance.push_back(t.variance(s));
  Tensor out(n, std::move(variance));
  const std::size_t st = t.stride(slot);
  const std::size_t outer = detail::ipow(n, slot);
  const auto src = t.data();
  auto dst = out.data();
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t r = 0; r < st; ++r) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        s += v[static_cast<std::size_t>(a)] * src[(o * n + a) * st + r];
      dst[o * st + r] = s;
    }
  return out;
}

/// g^{ij} t_ij for a covariant 2-tensor.
inline double trace(const Tensor& t, const MetricAtPoint& m) {
  require(t.rank() == 2, "trace needs a rank-2 tensor");
  return contract(t, 0, 1, m).value();
}

/// Z - (tr Z / n) g.
inline Tensor traceless_part(const Tensor& t, const MetricAtPoint& m) {
  require(t.rank() == 2 && t.variance(0) == Variance::lower && t.variance(1) == Variance::lower,
          "traceless part needs a covariant rank-2 tensor");
  const double scale = std::max(1.0, t.max_abs());
  const int n = t.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      require(std::abs(t(i, j) - t(j, i)) <= 1e-9 * scale, "traceless part needs a symmetric tensor");
  Tensor out = t - metric_tensor(m) * (trace(t, m) / n);
  out.declare_symmetry(Symmetry::symmetric_pair);
  return out;
}

/// (a ⊙ b)_ijkl = a_ik b_jl + a_jl b_ik - a_il b_jk - a_jk b_il.
inline Tensor kulkarni_nomizu(const Tensor& a, const Tensor& b) {
  require(a.rank() == 2 && b.rank() == 2, "Kulkarni-Nomizu product needs rank-2 inputs");
  require(a.dim() == b.dim(), "Kulkarni-Nomizu product needs equal dimensions");
  const int n = a.dim();
  Tensor out = Tensor::zeros(n, 4, Symmetry::riemann_type);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out(i, j, k, l) = a(i, k) * b(j, l) + a(j, l) * b(i, k) - a(i, l) * b(j, k) -
                            a(j, k) * b(i, l);
  return out;
}

/// Contravariant components g^{ij} w_j of a covector.
inline Eigen::VectorXd raise_vector(const Tensor& w, const MetricAtPoint& m) {
  require(w.rank() == 1, "raise_vector needs a covector");
  Eigen::VectorXd v(w.dim());
  for (int i = 0; i < w.dim(); ++i) v(i) = w(i);
  return m.inverse() * v;
}

}  // namespace vstatic
