#pragma once

// Points of the 1-jet space J^1(R, M^n) and the conformally deformed
// product metric built over them:
//
//   F*(t,x,y) = e^{sigma(x)} sqrt(h^11(t)) (y^1 y^2 ... y^n)^{1/n}
//
// with h^11 = 1/h11 > 0 and the product of the fibre coordinates positive.
// Everything downstream (connection, curvature, field equations) is a pure
// function of a GeometryConfig and a JetPoint.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "expr.hpp"

namespace jetbm {

struct GeometryConfig {
  int n = 0;
  Expression sigma;  // over x1..xn
  Expression h11;    // over t
  double einstein_K = 1.0;

  static GeometryConfig make(int n, const std::string& sigma_src,
                             const std::string& h11_src, double K = 1.0) {
    if (n < 2) throw ConfigError("dimension must be >= 2");
    if (!(K > 0.0)) throw ConfigError("Einstein constant must be positive");
    std::vector<std::string> xs;
    for (int i = 1; i <= n; ++i) xs.push_back("x" + std::to_string(i));
    return GeometryConfig{n, Expression::parse(sigma_src, std::move(xs)),
                          Expression::parse(h11_src, {"t"}), K};
  }
};

struct JetPoint {
  double t = 0.0;
  Vec x;
  Vec y;
};

// Product of the fibre coordinates.  The callers guard the sign; this also
// backs the identity dG/dy^i = G/y^i used throughout the closed forms.
inline double product_G(const Vec& y) {
  double p = 1.0;
  for (double v : y) p *= v;
  return p;
}

inline double product_G_derivative(const Vec& y, int i) {
  return product_G(y) / y[std::size_t(i)];
}

inline void validate_point(const GeometryConfig& cfg, const JetPoint& p) {
  if (int(p.x.size()) != cfg.n || int(p.y.size()) != cfg.n)
    throw DomainError("point dimension does not match the configuration");
  for (double v : p.y)
    if (v == 0.0) throw DomainError("fibre coordinate is zero");
  if (!(product_G(p.y) > 0.0))
    throw DomainError("fibre product y^1...y^n is not positive");
}

struct TemporalData {
  double h11 = 0.0;      // h11(t)
  double h11_inv = 0.0;  // h^11 = 1/h11
  double dh11_dt = 0.0;
  double kappa = 0.0;    // (h^11/2) dh11/dt, the Christoffel symbol of h11
};

inline TemporalData temporal_data(const GeometryConfig& cfg, double t) {
  EvalResult r = cfg.h11.derivatives_at({t}, {0});
  if (!(r.value > 0.0))
    throw DomainError("h11(t) must be positive (got " +
                      std::to_string(r.value) + ")");
  TemporalData d;
  d.h11 = r.value;
  d.h11_inv = 1.0 / r.value;
  d.dh11_dt = r.gradient[0];
  d.kappa = 0.5 * d.h11_inv * d.dh11_dt;
  return d;
}

// sigma with exact gradient and Hessian at x (forward AD, never FD).
struct SigmaData {
  double value = 0.0;
  Vec grad;
  Mat hess;
};

inline SigmaData sigma_data(const GeometryConfig& cfg, const Vec& x) {
  std::vector<int> all(std::size_t(cfg.n));
  for (int i = 0; i < cfg.n; ++i) all[std::size_t(i)] = i;
  EvalResult r = cfg.sigma.derivatives_at(x, all);
  return SigmaData{r.value, std::move(r.gradient), std::move(r.hessian)};
}

inline double fstar(const GeometryConfig& cfg, const JetPoint& p) {
  validate_point(cfg, p);
  TemporalData td = temporal_data(cfg, p.t);
  double G = product_G(p.y);
  return std::exp(cfg.sigma(p.x)) * std::sqrt(td.h11_inv) *
         std::exp(std::log(G) / cfg.n);
}

// F*^2, the Lagrangian density the definitional oracle differentiates.
inline double fstar_squared(const GeometryConfig& cfg, const JetPoint& p) {
  validate_point(cfg, p);
  TemporalData td = temporal_data(cfg, p.t);
  double G = product_G(p.y);
  return std::exp(2.0 * cfg.sigma(p.x)) * td.h11_inv *
         std::exp(2.0 * std::log(G) / cfg.n);
}

struct SpatialMetric {
  Mat g;       // covariant fundamental tensor
  Mat g_inv;   // contravariant inverse (closed form)
  double G_product = 0.0;
  double fstar = 0.0;
};

// Closed forms (no sum over repeated indices):
//   g_ij   = (e^{2 sigma}/n) (2/n - delta_ij) G^{2/n} / (y^i y^j)
//   g^{jk} = e^{-2 sigma} (2 - n delta^{jk}) G^{-2/n} y^j y^k
inline SpatialMetric metric(const GeometryConfig& cfg, const JetPoint& p) {
  validate_point(cfg, p);
  const int n = cfg.n;
  const double G = product_G(p.y);
  const double G2n = std::exp(2.0 * std::log(G) / n);
  const double s = cfg.sigma(p.x);
  const double e2s = std::exp(2.0 * s);

  SpatialMetric m;
  m.g = Mat(n);
  m.g_inv = Mat(n);
  m.G_product = G;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = i == j ? 1.0 : 0.0;
      m.g(i, j) = e2s / n * (2.0 / n - d) * G2n /
                  (p.y[std::size_t(i)] * p.y[std::size_t(j)]);
      m.g_inv(i, j) = (2.0 - n * d) / (e2s * G2n) * p.y[std::size_t(i)] *
                      p.y[std::size_t(j)];
    }
  }
  TemporalData td = temporal_data(cfg, p.t);
  m.fstar = std::exp(s) * std::sqrt(td.h11_inv) * std::exp(std::log(G) / n);
  return m;
}

// Integrand of the energy action functional: F*^2 sqrt(h11).
inline double energy_density(const GeometryConfig& cfg, const JetPoint& p) {
  TemporalData td = temporal_data(cfg, p.t);
  return fstar_squared(cfg, p) * std::sqrt(td.h11);
}

}  // namespace jetbm
