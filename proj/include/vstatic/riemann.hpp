#pragma once

// Pointwise curvature from the 2-jet of the metric.
//
// Conventions: R^a_{bcd} = d_c Γ^a_{db} - d_d Γ^a_{cb} + Γ^a_{ce}Γ^e_{db} - Γ^a_{de}Γ^e_{cb},
// R_{ijkl} = g_{ka} R^a_{lij}, so the unit sphere has R_{ijkl} = g_ik g_jl - g_il g_jk.
// Ric_{jl} = g^{ik} R_{ijkl}.

#include <algorithm>

#include <Eigen/Dense>

#include "vstatic/chart.hpp"
#include "vstatic/errors.hpp"
#include "vstatic/tensor.hpp"

namespace vstatic {

struct LocalCurvature {
  MetricAtPoint metric;
  Tensor gamma;     // Γ^a_{bc}
  Tensor riemann;   // R_{ijkl}
  Tensor ricci;     // R_{ij}
  double scalar = 0.0;
  Tensor schouten;  // A_{ij}
  Tensor weyl;      // W_{ijkl}, zero for n = 3

  int dim() const { return metric.dim(); }
};

/// Γ^a_{bc} from g and dg(k, i, j) = d_k g_ij.
inline Tensor christoffel_from_jet(const MetricAtPoint& m, const Tensor& dg) {
  const int n = m.dim();
  Tensor gamma(n, {Variance::upper, Variance::lower, Variance::lower});
  for (int e = 0; e < n; ++e)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c <= b; ++c) {
        const double first = 0.5 * (dg(b, e, c) + dg(c, e, b) - dg(e, b, c));
        if (first == 0.0) continue;
        for (int a = 0; a < n; ++a) {
          const double w = m.inv(a, e) * first;
          gamma(a, b, c) += w;
          if (c != b) gamma(a, c, b) += w;
        }
      }
  return gamma;
}

inline Tensor schouten_tensor(const Tensor& ricci, double scalar, const MetricAtPoint& m) {
  const int n = m.dim();
  require(n >= 3, "Schouten tensor needs n >= 3");
  Tensor a = ricci - metric_tensor(m) * (scalar / (2.0 * (n - 1)));
  a.declare_symmetry(Symmetry::symmetric_pair);
  return a;
}

/// W = Rm - (A ⊙ g)/(n-2); exact zeros for n = 3.
inline Tensor weyl_tensor(const Tensor& riemann, const Tensor& schouten, const MetricAtPoint& m) {
  const int n = m.dim();
  if (n == 3) return Tensor::zeros(n, 4, Symmetry::riemann_type);
  Tensor w = riemann - kulkarni_nomizu(schouten, metric_tensor(m)) * (1.0 / (n - 2));
  w.declare_symmetry(Symmetry::riemann_type);
  return w;
}

/// W written out in Ricci terms:
/// W = Rm - (R_ik g_jl + R_jl g_ik - R_il g_jk - R_jk g_il)/(n-2) + R (g_ik g_jl - g_il g_jk)/((n-1)(n-2)).
inline Tensor weyl_from_ricci(const Tensor& rm, const Tensor& ric, double scalar, const MetricAtPoint& m) {
  const int n = m.dim();
  require(n >= 3, "Weyl tensor needs n >= 3");
  const Eigen::MatrixXd& g = m.g();
  const double a = 1.0 / (n - 2);
  const double b = scalar / ((n - 1.0) * (n - 2.0));
  Tensor w = Tensor::zeros(n, 4, Symmetry::riemann_type);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          w(i, j, k, l) = rm(i, j, k, l) -
                          a * (ric(i, k) * g(j, l) + ric(j, l) * g(i, k) - ric(i, l) * g(j, k) - ric(j, k) * g(i, l)) +
                          b * (g(i, k) * g(j, l) - g(i, l) * g(j, k));
  return w;
}

/// Largest g-norm over the six single contractions of a rank-4 tensor.
inline double trace_defect4(const Tensor& w, const MetricAtPoint& m) {
  require(w.rank() == 4, "trace defect needs a rank-4 tensor");
  double worst = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) worst = std::max(worst, norm(contract(w, a, b, m), m));
  return worst;
}

inline LocalCurvature curvature_from_jet(const MetricAtPoint& m, const Tensor& dg, const Tensor& ddg) {
  const int n = m.dim();
  require(dg.dim() == n && dg.rank() == 3 && ddg.dim() == n && ddg.rank() == 4,
          "metric jet has the wrong shape");
  LocalCurvature out{m, christoffel_from_jet(m, dg), Tensor::zeros(n, 4, Symmetry::riemann_type),
                     Tensor::zeros(n, 2, Symmetry::symmetric_pair), 0.0, Tensor{}, Tensor{}};
  const Tensor& G = out.gamma;

  // Christoffel symbols of the first kind and their derivatives.
  Tensor g1 = Tensor::zeros(n, 3);
  Tensor dg1 = Tensor::zeros(n, 4);
  for (int e = 0; e < n; ++e)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        g1(e, b, c) = 0.5 * (dg(b, e, c) + dg(c, e, b) - dg(e, b, c));
        for (int i = 0; i < n; ++i)
          dg1(i, e, b, c) = 0.5 * (ddg(i, b, e, c) + ddg(i, c, e, b) - ddg(i, e, b, c));
      }

  Tensor& rm = out.riemann;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = dg1(i, k, j, l) - dg1(j, k, i, l);
          for (int a = 0; a < n; ++a) v += g1(a, j, k) * G(a, i, l) - g1(a, i, k) * G(a, j, l);
          rm(i, j, k, l) = v;
        }

  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      double v = 0.0;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) v += m.inv(i, k) * rm(i, j, k, l);
      out.ricci(j, l) = v;
    }
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) out.scalar += m.inv(j, l) * out.ricci(j, l);

  if (n >= 3) {
    out.schouten = schouten_tensor(out.ricci, out.scalar, m);
    out.weyl = weyl_tensor(out.riemann, out.schouten, m);
  }
  return out;
}

}  // namespace vstatic
