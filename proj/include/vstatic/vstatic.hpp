#pragma once

// Pointwise V-static identities: the defining equation in its three forms,
// the T tensor, the Ricci/Weyl/Cotton identities satisfied by every V-static
// triple, the integrand identity for radial Bach-flatness, the n = 3 Bach
// identities, the parallel-Ricci obstruction and level-set geometry.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vstatic/curvature.hpp"
#include "vstatic/errors.hpp"
#include "vstatic/model.hpp"
#include "vstatic/tensor.hpp"

namespace vstatic {

inline constexpr double kCriticalGradient = 1e-8;

/// Everything at one point that more than one identity needs, computed once.
class PointContext {
 public:
  PointContext(const MetricModel& model, const Point& p, const DerivativePlan& plan)
      : model_(&model), p_(p), eng_(model, plan), local_(eng_.local(p)) {
    const int n = model.n;
    const PotentialJet jet = model.potential(p);
    f_ = jet.value;
    df_ = Tensor::zeros(n, 1);
    for (int i = 0; i < n; ++i) df_(i) = jet.grad(i);
    grad_up_ = raise_vector(df_, local_.metric);
    hess_ = Tensor::zeros(n, 2, Symmetry::symmetric_pair);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = jet.hess(i, j);
        for (int k = 0; k < n; ++k) v -= local_.gamma(k, i, j) * jet.grad(k);
        hess_(i, j) = v;
      }
    laplacian_ = trace(hess_, local_.metric);
  }

  const MetricModel& model() const { return *model_; }
  const Point& point() const { return p_; }
  const CurvatureEngine& engine() const { return eng_; }
  const LocalCurvature& local() const { return local_; }
  const MetricAtPoint& metric() const { return local_.metric; }
  int dim() const { return model_->n; }

  double f() const { return f_; }
  const Tensor& df() const { return df_; }
  const Eigen::VectorXd& grad_up() const { return grad_up_; }
  std::vector<double> grad_vector() const { return {grad_up_.data(), grad_up_.data() + grad_up_.size()}; }
  double grad_norm() const { return std::sqrt(std::max(0.0, grad_up_.dot(as_vector(df_)))); }
  const Tensor& hess() const { return hess_; }
  double laplacian() const { return laplacian_; }

  const Tensor& grad_ricci() const {
    if (!dric_) dric_ = eng_.grad_ricci(p_);
    return *dric_;
  }
  const Tensor& cotton() const {
    if (!cotton_) cotton_ = CurvatureEngine::cotton_from_grad_ricci(grad_ricci(), metric());
    return *cotton_;
  }
  const Tensor& bach() const {
    if (!bach_) bach_ = eng_.bach(p_);
    return *bach_;
  }

  static Eigen::VectorXd as_vector(const Tensor& t) {
    Eigen::VectorXd v(t.dim());
    for (int i = 0; i < t.dim(); ++i) v(i) = t(i);
    return v;
  }

 private:
  const MetricModel* model_;
  Point p_;
  CurvatureEngine eng_;
  LocalCurvature local_;
  double f_ = 0.0;
  Tensor df_;
  Eigen::VectorXd grad_up_;
  Tensor hess_;
  double laplacian_ = 0.0;
  mutable std::optional<Tensor> dric_;
  mutable std::optional<Tensor> cotton_;
  mutable std::optional<Tensor> bach_;
};

/// The defining equation in three forms:
///   main_ij   = -(Δf) g_ij + ∇_i∇_j f - f R_ij - κ g_ij
///   trace     = Δf + (f R + κ n)/(n-1)
///   traceless = f R̊ic - ∇̊²f
/// with tr(main) = -(n-1) · trace.
struct VStaticResidualSet {
  Tensor main;
  double trace = 0.0;
  Tensor traceless;
  double main_norm = 0.0;
  double traceless_norm = 0.0;
};

inline VStaticResidualSet vstatic_residuals(const PointContext& c) {
  const int n = c.dim();
  const auto& lc = c.local();
  const Tensor g = metric_tensor(c.metric());
  VStaticResidualSet out;
  out.main = g * (-c.laplacian() - c.model().kappa) + c.hess() - lc.ricci * c.f();
  out.trace = c.laplacian() + (c.f() * lc.scalar + c.model().kappa * n) / (n - 1);
  out.traceless = traceless_part(lc.ricci, c.metric()) * c.f() - traceless_part(c.hess(), c.metric());
  out.main_norm = norm(out.main, c.metric());
  out.traceless_norm = norm(out.traceless, c.metric());
  return out;
}

struct TTensor {
  Tensor components;
  double norm_sq = 0.0;
};

/// T_ijk = (n-1)/(n-2)(R_ik ∇_jf - R_jk ∇_if) - R/(n-2)(g_ik ∇_jf - g_jk ∇_if)
///         + (g_ik R_js ∇^s f - g_jk R_is ∇^s f)/(n-2).
inline TTensor t_tensor(const PointContext& c) {
  const int n = c.dim();
  require(n >= 3, "T tensor needs n >= 3");
  const auto& lc = c.local();
  const Tensor& df = c.df();
  const Tensor ric_df = apply_vector(lc.ricci, 1, c.grad_vector());  // R_is ∇^s f
  const double a = (n - 1.0) / (n - 2.0);
  const double b = lc.scalar / (n - 2.0);
  const double e = 1.0 / (n - 2.0);
  Tensor t = Tensor::zeros(n, 3, Symmetry::skew_pair);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double gik = c.metric().g(i, k);
        const double gjk = c.metric().g(j, k);
        t(i, j, k) = a * (lc.ricci(i, k) * df(j) - lc.ricci(j, k) * df(i)) - b * (gik * df(j) - gjk * df(i)) +
                     e * (gik * ric_df(j) - gjk * ric_df(i));
      }
  return {t, full_norm_sq(t, c.metric())};
}

/// f(∇_iR_jk - ∇_jR_ik) - R_ijkl∇^l f - R/(n-1)(∇_if g_jk - ∇_jf g_ik) + (∇_if R_jk - ∇_jf R_ik).
inline Tensor lemma1_residual(const PointContext& c) {
  const int n = c.dim();
  const auto& lc = c.local();
  const Tensor& dric = c.grad_ricci();
  const Tensor& df = c.df();
  const Tensor rm_df = apply_vector(lc.riemann, 3, c.grad_vector());
  const double w = lc.scalar / (n - 1);
  Tensor out = Tensor::zeros(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        out(i, j, k) = c.f() * (dric(i, j, k) - dric(j, i, k)) - rm_df(i, j, k) -
                       w * (df(i) * c.metric().g(j, k) - df(j) * c.metric().g(i, k)) +
                       (df(i) * lc.ricci(j, k) - df(j) * lc.ricci(i, k));
  return out;
}

/// f C_ijk - T_ijk - W_ijkl ∇^l f, with the three terms kept for reporting.
struct Lemma2Terms {
  Tensor residual;
  double fc_norm = 0.0;
  double t_norm = 0.0;
  double w_norm = 0.0;
};

inline Lemma2Terms lemma2_residual(const PointContext& c) {
  const Tensor fc = c.cotton() * c.f();
  const Tensor t = t_tensor(c).components;
  const Tensor wdf = apply_vector(c.local().weyl, 3, c.grad_vector());
  return {fc - t - wdf, norm(fc, c.metric()), norm(t, c.metric()), norm(wdf, c.metric())};
}

/// div(R̊ic(∇f)) - f |R̊ic|², the divergence taken by differencing the field.
struct ScalarIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual() const { return lhs - rhs; }
};

inline ScalarIdentity divergence_identity(const PointContext& c) {
  const MetricModel& model = c.model();
  const CurvatureEngine& eng = c.engine();
  const TensorField field = [&model, &eng](const Point& x) {
    const LocalCurvature lc = eng.local(x, 1);
    const PotentialJet jet = model.potential(x);
    const Tensor df = Tensor::covector(std::span<const double>(jet.grad.data(), static_cast<std::size_t>(jet.grad.size())));
    const Eigen::VectorXd up = raise_vector(df, lc.metric);
    return apply_vector(traceless_part(lc.ricci, lc.metric), 1, std::span<const double>(up.data(), static_cast<std::size_t>(up.size())));
  };
  const Tensor dv = eng.covariant_derivative(field, c.point());
  const Tensor ric0 = traceless_part(c.local().ricci, c.metric());
  return {contract(dv, 0, 1, c.metric()).value(), c.f() * full_norm_sq(ric0, c.metric())};
}

/// (n-2) f² B(∇f,∇f) = ∇_k(f T_kij ∇^if ∇^jf) - (n-2)/(2(n-1)) f²|T|².
struct RadialBachTerms {
  double lhs = 0.0;        // (n-2) f² B(∇f,∇f)
  double divergence = 0.0; // ∇_k(f T_kij ∇^if ∇^jf)
  double t_term = 0.0;     // (n-2)/(2(n-1)) f²|T|²
  double radial_bach = 0.0;
  double residual() const { return lhs - (divergence - t_term); }
  // the terms reach 1e4 on the hyperbolic products
  double scale() const { return std::max({1.0, std::abs(lhs), std::abs(divergence), std::abs(t_term)}); }
  double relative_residual() const { return residual() / scale(); }
};

inline RadialBachTerms radial_bach_terms(const PointContext& c) {
  const int n = c.dim();
  require(n >= 4, "this identity is used for n >= 4");
  const MetricModel& model = c.model();
  const DerivativePlan plan = c.engine().plan();
  const TensorField field = [&model, plan](const Point& x) {
    const PointContext cx(model, x, plan);
    const Tensor t = t_tensor(cx).components;
    const Tensor tv = apply_vector(apply_vector(t, 2, cx.grad_vector()), 1, cx.grad_vector());
    return tv * cx.f();
  };
  const Tensor dx = c.engine().covariant_derivative(field, c.point());
  RadialBachTerms out;
  const std::vector<double> v = c.grad_vector();
  const Tensor bv = apply_vector(apply_vector(c.bach(), 1, v), 0, v);
  out.radial_bach = bv.value();
  out.lhs = (n - 2.0) * c.f() * c.f() * out.radial_bach;
  out.divergence = contract(dx, 0, 1, c.metric()).value();
  out.t_term = (n - 2.0) / (2.0 * (n - 1.0)) * c.f() * c.f() * t_tensor(c).norm_sq;
  return out;
}

/// n = 3: first = div B(∇f) - (f/4)|C|², second = ∇^iB_ij ∇^jf + R^{ik} C_jki ∇^jf.
struct Dim3BachIdentity {
  double div_b_grad_f = 0.0;
  double quarter_f_c_sq = 0.0;
  double div_b_dot_grad_f = 0.0;
  double ricci_cotton = 0.0;
  double first() const { return div_b_grad_f - quarter_f_c_sq; }
  double second() const { return div_b_dot_grad_f + ricci_cotton; }
};

inline Dim3BachIdentity dim3_bach_identity(const PointContext& c) {
  require(c.dim() == 3, "the three-dimensional Bach identities need n = 3");
  const CurvatureEngine& eng = c.engine();
  const TensorField bfield = [&eng](const Point& x) { return eng.bach3(x, 1); };
  const Tensor db = eng.covariant_derivative(bfield, c.point());  // ∇_a B_ij
  const Tensor divb = contract(db, 0, 1, c.metric());             // ∇^i B_ij
  const MetricAtPoint& m = c.metric();
  const std::vector<double> v = c.grad_vector();
  const Tensor b = eng.bach3(c.point(), 0);
  const Tensor hess_up = flip_all(c.hess(), m);
  const Tensor ric_up = flip_all(c.local().ricci, m);
  const Tensor cv = apply_vector(c.cotton(), 0, v);  // C_jki ∇^j f -> (k, i)

  Dim3BachIdentity out;
  double bh = 0.0;
  double rc = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      bh += b(i, j) * hess_up(i, j);
      rc += ric_up(i, j) * cv(j, i);
    }
  out.div_b_dot_grad_f = apply_vector(divb, 0, v).value();
  out.div_b_grad_f = out.div_b_dot_grad_f + bh;
  out.quarter_f_c_sq = 0.25 * c.f() * full_norm_sq(c.cotton(), m);
  out.ricci_cotton = rc;
  return out;
}

/// n = 3, any metric: ∇^iB_ij + R^{ik} C_jki as a covector.
inline Tensor bach3_divergence_residual(const PointContext& c) {
  require(c.dim() == 3, "this Bach divergence identity needs n = 3");
  const CurvatureEngine& eng = c.engine();
  const TensorField bfield = [&eng](const Point& x) { return eng.bach3(x, 1); };
  const Tensor divb = contract(eng.covariant_derivative(bfield, c.point()), 0, 1, c.metric());
  const Tensor ric_up = flip_all(c.local().ricci, c.metric());
  const Tensor& cot = c.cotton();
  Tensor out = divb;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) out(j) += ric_up(i, k) * cot(j, k, i);
  return out;
}

/// |∇Ric|, |Ric|² - R²/n and the obstruction κ n/(n-1) (|Ric|² - R²/n).
struct ParallelRicciProbe {
  double grad_ric_norm = 0.0;
  double ricci_excess = 0.0;
  double obstruction = 0.0;
};

inline ParallelRicciProbe parallel_ricci_probe(const PointContext& c) {
  const int n = c.dim();
  const auto& lc = c.local();
  ParallelRicciProbe out;
  out.grad_ric_norm = norm(c.grad_ricci(), c.metric());
  out.ricci_excess = full_norm_sq(lc.ricci, c.metric()) - lc.scalar * lc.scalar / n;
  out.obstruction = c.model().kappa * n / (n - 1.0) * out.ricci_excess;
  return out;
}

struct LevelSetProbe {
  Eigen::VectorXd e1;
  std::vector<Eigen::VectorXd> tangent_frame;
  Eigen::MatrixXd second_fund;  // h_{αβ} in the tangent frame
  double mean_curv = 0.0;
  double umbilicity_dev = 0.0;
  double grad_norm_tangential_variation = 0.0;
  double mixed_ricci = 0.0;
  double mixed_riemann = 0.0;  // max |R(e1, eα, eβ, eγ)|
  double frame_defect = 0.0;   // max |g(ea, eb) - δab|
};

inline LevelSetProbe level_set_probe(const PointContext& c) {
  const int n = c.dim();
  const MetricAtPoint& m = c.metric();
  const double gn = c.grad_norm();
  if (!(gn > kCriticalGradient)) throw CriticalPointError("probe undefined at critical points (|grad f| <= 1e-8)");

  const Eigen::MatrixXd& G = m.g();
  auto ip = [&G](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a.dot(G * b); };

  LevelSetProbe out;
  out.e1 = c.grad_up() / gn;
  std::vector<Eigen::VectorXd> basis{out.e1};
  for (int a = 0; a < n && static_cast<int>(basis.size()) < n; ++a) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(n, a);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) v -= ip(v, b) * b;
    const double len = std::sqrt(ip(v, v));
    if (len < 1e-6 * std::sqrt(G(a, a))) continue;
    basis.push_back(v / len);
  }
  require(static_cast<int>(basis.size()) == n, "could not complete the tangent frame");
  out.tangent_frame.assign(basis.begin() + 1, basis.end());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      out.frame_defect = std::max(out.frame_defect, std::abs(ip(basis[a], basis[b]) - (a == b ? 1.0 : 0.0)));

  Eigen::MatrixXd H(n, n), ric(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      H(i, j) = c.hess()(i, j);
      ric(i, j) = c.local().ricci(i, j);
    }
  const int t = n - 1;
  out.second_fund.resize(t, t);
  for (int a = 0; a < t; ++a)
    for (int b = 0; b < t; ++b)
      out.second_fund(a, b) = out.tangent_frame[a].dot(H * out.tangent_frame[b]) / gn;
  out.mean_curv = out.second_fund.trace();
  out.umbilicity_dev = (out.second_fund - (out.mean_curv / t) * Eigen::MatrixXd::Identity(t, t)).norm();

  const Tensor& rm = c.local().riemann;
  auto rm4 = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& cc,
                 const Eigen::VectorXd& d) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double ab = a(i) * b(j);
        if (ab == 0.0) continue;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) s += ab * cc(k) * d(l) * rm(i, j, k, l);
      }
    return s;
  };
  for (int a = 0; a < t; ++a) {
    const auto& ea = out.tangent_frame[a];
    // e_α(|∇f|) = Hess f(e1, e_α)
    out.grad_norm_tangential_variation =
        std::max(out.grad_norm_tangential_variation, std::abs(out.e1.dot(H * ea)));
    out.mixed_ricci = std::max(out.mixed_ricci, std::abs(out.e1.dot(ric * ea)));
    for (int b = 0; b < t; ++b)
      for (int g = 0; g < t; ++g)
        out.mixed_riemann = std::max(
            out.mixed_riemann, std::abs(rm4(out.e1, ea, out.tangent_frame[b], out.tangent_frame[g])));
  }
  return out;
}

}  // namespace vstatic
