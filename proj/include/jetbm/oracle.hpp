#pragma once

// Definitional oracle: every geometric object recomputed straight from the
// defining displays by numerical differentiation of F*^2 (or of the
// closed-form connection fields), with no reuse of the closed-form
// derivative algebra.  This is the independent side of every
// closed-form-vs-definition check in the suite.
//
// Also houses the diagonal jet chart changes used by the tensoriality
// checks.

#include <cmath>
#include <utility>
#include <vector>

#include "connection.hpp"
#include "core.hpp"
#include "curvature.hpp"
#include "fd.hpp"
#include "geometry.hpp"

namespace jetbm {

namespace detail {

inline JetPoint with_t(const JetPoint& p, double t) {
  JetPoint q = p;
  q.t = t;
  return q;
}
inline JetPoint with_x(const JetPoint& p, int i, double v) {
  JetPoint q = p;
  q.x[std::size_t(i)] = v;
  return q;
}
inline JetPoint with_y(const JetPoint& p, int i, double v) {
  JetPoint q = p;
  q.y[std::size_t(i)] = v;
  return q;
}

}  // namespace detail

// g_ij = (h11/2) d^2(F*^2)/dy^i dy^j by central differences of the scalar
// F*^2.
inline Mat oracle_metric(const GeometryConfig& cfg, const JetPoint& p,
                         const DiffScheme& scheme = {}) {
  validate_point(cfg, p);
  const int n = cfg.n;
  TemporalData td = temporal_data(cfg, p.t);
  Mat g(n);
  for (int i = 0; i < n; ++i) {
    g(i, i) = 0.5 * td.h11 *
              fd::second(
                  [&](double v) {
                    return fstar_squared(cfg, detail::with_y(p, i, v));
                  },
                  p.y[std::size_t(i)], scheme);
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * td.h11 *
                       fd::mixed(
                           [&](double a, double b) {
                             return fstar_squared(
                                 cfg, detail::with_y(detail::with_y(p, i, a), j, b));
                           },
                           p.y[std::size_t(i)], p.y[std::size_t(j)], scheme);
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

// Spray from the Euler-Lagrange bracket of the energy functional:
//   G^i = (h11 g^ip/4) [ d2F2/dx^r dy^p y^r - dF2/dx^p + d2F2/dt dy^p
//                        + dF2/dy^p kappa + 2 h^11 kappa g_pr y^r ]
// with every F*^2 derivative taken numerically and the metric factors from
// the closed form (they are algebra, not differentiation).
inline Vec oracle_spray(const GeometryConfig& cfg, const JetPoint& p,
                        const DiffScheme& scheme = {}) {
  validate_point(cfg, p);
  const int n = cfg.n;
  TemporalData td = temporal_data(cfg, p.t);
  SpatialMetric met = metric(cfg, p);

  Vec bracket(std::size_t(n), 0.0);
  for (int q = 0; q < n; ++q) {
    double b = 0.0;
    for (int r = 0; r < n; ++r)
      b += fd::mixed(
               [&](double xv, double yv) {
                 return fstar_squared(
                     cfg, detail::with_y(detail::with_x(p, r, xv), q, yv));
               },
               p.x[std::size_t(r)], p.y[std::size_t(q)], scheme) *
           p.y[std::size_t(r)];
    b -= fd::first(
        [&](double xv) { return fstar_squared(cfg, detail::with_x(p, q, xv)); },
        p.x[std::size_t(q)], scheme);
    b += fd::mixed(
        [&](double tv, double yv) {
          return fstar_squared(cfg, detail::with_y(detail::with_t(p, tv), q, yv));
        },
        p.t, p.y[std::size_t(q)], scheme);
    b += td.kappa *
         fd::first(
             [&](double yv) {
               return fstar_squared(cfg, detail::with_y(p, q, yv));
             },
             p.y[std::size_t(q)], scheme);
    double gy = 0.0;
    for (int r = 0; r < n; ++r) gy += met.g(q, r) * p.y[std::size_t(r)];
    b += 2.0 * td.h11_inv * td.kappa * gy;
    bracket[std::size_t(q)] = b;
  }

  Vec G(std::size_t(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double v = 0.0;
    for (int q = 0; q < n; ++q) v += met.g_inv(i, q) * bracket[std::size_t(q)];
    G[std::size_t(i)] = 0.25 * td.h11 * v;
  }
  return G;
}

enum class SpraySource { oracle, closed_form };

// N^{(i)}_{(1)j} = dG^{(i)}/dy^j by differencing the chosen spray field.
// Differencing the oracle spray is a second-level FD: the inner evaluations
// use coarsened steps with Richardson so their roundoff, amplified by the
// outer quotient, stays inside the second-level tolerance; the outer step
// uses the second-derivative rule.
inline Mat oracle_nonlinear(const GeometryConfig& cfg, const JetPoint& p,
                            const DiffScheme& scheme = {},
                            SpraySource source = SpraySource::oracle) {
  validate_point(cfg, p);
  const int n = cfg.n;
  DiffScheme inner{1e-4, 1e-3, true, scheme.max_shrink};
  auto field = [&](const JetPoint& q) -> Vec {
    if (source == SpraySource::oracle) return oracle_spray(cfg, q, inner);
    return spray(cfg, q).second;
  };
  DiffScheme outer = scheme;
  if (source == SpraySource::oracle) outer.eps_first = scheme.eps_second;
  Mat N(n);
  for (int j = 0; j < n; ++j) {
    Vec col = fd::first_field(
        [&](double yv) { return field(detail::with_y(p, j, yv)); },
        p.y[std::size_t(j)], outer);
    for (int i = 0; i < n; ++i) N(i, j) = col[std::size_t(i)];
  }
  return N;
}

enum class MetricSource { closed_form, oracle };

struct OracleCartan {
  Ten3 L;      // (g^im/2)(delta g_jm/dx^k + delta g_km/dx^j - delta g_jk/dx^m)
  Ten3 C;      // (g^im/2)(dg_jm/dy^k + dg_km/dy^j - dg_jk/dy^m)
  Mat G_time;  // (g^km/2) delta g_mj/delta t  -- confirms the zero block
};

inline OracleCartan oracle_cartan(const GeometryConfig& cfg, const JetPoint& p,
                                  const DiffScheme& scheme = {},
                                  MetricSource source = MetricSource::closed_form) {
  validate_point(cfg, p);
  const int n = cfg.n;
  DiffScheme inner{1e-4, 1e-3, true, scheme.max_shrink};
  auto g_field = [&](const JetPoint& q) -> Mat {
    if (source == MetricSource::oracle) return oracle_metric(cfg, q, inner);
    return metric(cfg, q).g;
  };
  SigmaData sd = sigma_data(cfg, p.x);
  TemporalData td = temporal_data(cfg, p.t);
  SpatialMetric met = metric(cfg, p);

  std::vector<Mat> dg_dx, dg_dy;
  for (int k = 0; k < n; ++k) {
    dg_dx.push_back(fd::first_field(
        [&](double v) { return g_field(detail::with_x(p, k, v)); },
        p.x[std::size_t(k)], scheme));
    dg_dy.push_back(fd::first_field(
        [&](double v) { return g_field(detail::with_y(p, k, v)); },
        p.y[std::size_t(k)], scheme));
  }
  // Adapted derivatives: delta/dx^k = d/dx^k - n sigma_k y^k d/dy^k (the
  // nonlinear connection is diagonal), delta/dt = d/dt + kappa y^p d/dy^p.
  std::vector<Mat> adapted_x;
  for (int k = 0; k < n; ++k) {
    Mat a(n);
    const double w = n * sd.grad[std::size_t(k)] * p.y[std::size_t(k)];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        a(i, j) = dg_dx[std::size_t(k)](i, j) - w * dg_dy[std::size_t(k)](i, j);
    adapted_x.push_back(std::move(a));
  }
  Mat dg_dt = fd::first_field(
      [&](double v) { return g_field(detail::with_t(p, v)); }, p.t, scheme);
  Mat adapted_t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = dg_dt(i, j);
      for (int q = 0; q < n; ++q)
        v += td.kappa * p.y[std::size_t(q)] * dg_dy[std::size_t(q)](i, j);
      adapted_t(i, j) = v;
    }

  OracleCartan out;
  out.L = Ten3(n);
  out.C = Ten3(n);
  out.G_time = Mat(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double l = 0.0, cc = 0.0;
        for (int m = 0; m < n; ++m) {
          l += 0.5 * met.g_inv(i, m) *
               (adapted_x[std::size_t(k)](j, m) + adapted_x[std::size_t(j)](k, m) -
                adapted_x[std::size_t(m)](j, k));
          cc += 0.5 * met.g_inv(i, m) *
                (dg_dy[std::size_t(k)](j, m) + dg_dy[std::size_t(j)](k, m) -
                 dg_dy[std::size_t(m)](j, k));
        }
        out.L(i, j, k) = l;
        out.C(i, j, k) = cc;
      }
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      for (int m = 0; m < n; ++m) v += 0.5 * met.g_inv(k, m) * adapted_t(m, j);
      out.G_time(k, j) = v;
    }
  return out;
}

struct OracleCurvatures {
  Ten3 torsion_R;  // delta N^r_i/dx^j - delta N^r_j/dx^i
  Ten4 R, P, S;
};

// Each curvature display evaluated with FD adapted derivatives of the
// closed-form connection fields; products use the exact component values at
// the base point.
inline OracleCurvatures oracle_curvatures(const GeometryConfig& cfg,
                                          const JetPoint& p,
                                          const DiffScheme& scheme = {}) {
  validate_point(cfg, p);
  const int n = cfg.n;
  SigmaData sd = sigma_data(cfg, p.x);
  ConnectionBundle b = cartan(cfg, p);

  auto N_field = [&](const JetPoint& q) {
    return nonlinear_connection(cfg, q).second;
  };
  auto L_field = [&](const JetPoint& q) { return cartan(cfg, q).L; };
  auto C_field = [&](const JetPoint& q) { return cartan(cfg, q).C; };

  std::vector<Mat> dN_dx, dN_dy;
  std::vector<Ten3> dL_dx, dL_dy, dCx, dCy;
  for (int k = 0; k < n; ++k) {
    dN_dx.push_back(fd::first_field(
        [&](double v) { return N_field(detail::with_x(p, k, v)); },
        p.x[std::size_t(k)], scheme));
    dN_dy.push_back(fd::first_field(
        [&](double v) { return N_field(detail::with_y(p, k, v)); },
        p.y[std::size_t(k)], scheme));
    dL_dx.push_back(fd::first_field(
        [&](double v) { return L_field(detail::with_x(p, k, v)); },
        p.x[std::size_t(k)], scheme));
    dL_dy.push_back(fd::first_field(
        [&](double v) { return L_field(detail::with_y(p, k, v)); },
        p.y[std::size_t(k)], scheme));
    dCx.push_back(fd::first_field(
        [&](double v) { return C_field(detail::with_x(p, k, v)); },
        p.x[std::size_t(k)], scheme));
    dCy.push_back(fd::first_field(
        [&](double v) { return C_field(detail::with_y(p, k, v)); },
        p.y[std::size_t(k)], scheme));
  }

  auto weight = [&](int k) {
    return double(n) * sd.grad[std::size_t(k)] * p.y[std::size_t(k)];
  };

  OracleCurvatures out;
  out.torsion_R = Ten3(n);
  for (int r = 0; r < n; ++r)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double a = dN_dx[std::size_t(j)](r, i) -
                         weight(j) * dN_dy[std::size_t(j)](r, i);
        const double c = dN_dx[std::size_t(i)](r, j) -
                         weight(i) * dN_dy[std::size_t(i)](r, j);
        out.torsion_R(r, i, j) = a - c;
      }

  out.R = Ten4(n);
  out.P = Ten4(n);
  out.S = Ten4(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double dLij_k = dL_dx[std::size_t(k)](l, i, j) -
                                weight(k) * dL_dy[std::size_t(k)](l, i, j);
          const double dLik_j = dL_dx[std::size_t(j)](l, i, k) -
                                weight(j) * dL_dy[std::size_t(j)](l, i, k);
          double r = dLij_k - dLik_j;
          for (int m = 0; m < n; ++m) {
            r += b.L(m, i, j) * b.L(l, m, k) - b.L(m, i, k) * b.L(l, m, j);
            r += b.C(l, i, m) * out.torsion_R(m, j, k);
          }
          out.R(l, i, j, k) = r;

          // covariant C derivative with the adapted x-derivative from FD
          double cov = dCx[std::size_t(j)](l, i, k) -
                       weight(j) * dCy[std::size_t(j)](l, i, k);
          for (int m = 0; m < n; ++m) {
            cov += b.C(m, i, k) * b.L(l, m, j);
            cov -= b.C(l, m, k) * b.L(m, i, j);
            cov -= b.C(l, i, m) * b.L(m, k, j);
          }
          double pv = dL_dy[std::size_t(k)](l, i, j) - cov;
          for (int m = 0; m < n; ++m)
            pv += b.C(l, i, m) * (dN_dy[std::size_t(k)](m, j) - b.L(m, j, k));
          out.P(l, i, j, k) = pv;

          double s = dCy[std::size_t(k)](l, i, j) - dCy[std::size_t(j)](l, i, k);
          for (int m = 0; m < n; ++m)
            s += b.C(m, i, j) * b.C(l, m, k) - b.C(m, i, k) * b.C(l, m, j);
          out.S(l, i, j, k) = s;
        }
  return out;
}

// Diagonal affine chart change of the jet space: t~ = c t + d0,
// x~^i = a_i x^i, hence y~^i = (a_i/c) y^i.
struct JetDiffeo {
  double c = 1.0;
  double d0 = 0.0;
  Vec a;
};

inline void validate_diffeo(const JetDiffeo& d) {
  if (d.c == 0.0) throw ConfigError("chart change needs c != 0");
  for (double ai : d.a)
    if (ai == 0.0) throw ConfigError("chart change needs a_i != 0");
}

inline JetPoint transform_point(const JetPoint& p, const JetDiffeo& d) {
  validate_diffeo(d);
  JetPoint q;
  q.t = d.c * p.t + d.d0;
  q.x.resize(p.x.size());
  q.y.resize(p.y.size());
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    q.x[i] = d.a[i] * p.x[i];
    q.y[i] = d.a[i] / d.c * p.y[i];
  }
  return q;
}

// The same geometry written in the tilde chart.  h11 transforms as a
// covariant 2-tensor on the time axis (factor 1/c^2); sigma pulls back
// through the inverse coordinate map plus the constant offset that keeps
// F* a scalar: the fibre product picks up the Jacobian factor
// J = (prod a_i)/c^n and sqrt(h~^11) the factor |c|, so
// sigma~(x~) = sigma(x~/a) - log|c| - (1/n) log J.
inline GeometryConfig transform_config(const GeometryConfig& cfg,
                                       const JetDiffeo& d) {
  validate_diffeo(d);
  const int n = cfg.n;
  double J = 1.0;
  for (double ai : d.a) J *= ai;
  J /= std::pow(d.c, n);
  if (!(J > 0.0))
    throw DomainError("chart change does not preserve the fibre orientation");
  const double offset = -std::log(std::abs(d.c)) - std::log(J) / n;
  GeometryConfig out = cfg;
  out.sigma = cfg.sigma.affine_pullback(d.a, Vec(std::size_t(n), 0.0), 1.0, offset);
  out.h11 = cfg.h11.affine_pullback({d.c}, {d.d0}, 1.0 / (d.c * d.c), 0.0);
  return out;
}

// Builds the geometry in the tilde chart, evaluates the definitional metric
// there, pulls it back through the (diagonal, constant) Jacobians and
// returns the largest deviation from the definitional metric at p.
inline double tensoriality_residual(const GeometryConfig& cfg,
                                    const JetDiffeo& d, const JetPoint& p,
                                    const DiffScheme& scheme = {}) {
  Mat base = oracle_metric(cfg, p, scheme);
  GeometryConfig tcfg = transform_config(cfg, d);
  JetPoint tp = transform_point(p, d);
  Mat tg = oracle_metric(tcfg, tp, scheme);
  const int n = cfg.n;
  Mat pulled(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      pulled(i, j) = d.a[std::size_t(i)] * d.a[std::size_t(j)] * tg(i, j);
  return max_abs_diff(pulled, base);
}

}  // namespace jetbm
