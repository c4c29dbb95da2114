#pragma once

// Spray, canonical nonlinear connection, Cartan canonical connection and
// its two nonzero torsion tensors, all in closed form.  The paper-level
// "no sum" conventions are written out as explicit componentwise loops;
// there is no implicit summation anywhere in this file.
//
// Index layout: rank-3 objects are stored [upper][lower1][lower2].

#include <utility>

#include "core.hpp"
#include "geometry.hpp"

namespace jetbm {

struct ConnectionBundle {
  Vec H;         // temporal spray  H^(i) = -(1/2) kappa y^i
  Vec Gs;        // spatial spray   G^(i) = (n/2) sigma_i (y^i)^2
  Vec M;         // temporal nonlinear connection, M^(i) = 2 H^(i)
  Mat N;         // spatial nonlinear connection, diagonal for this metric
  double kappa = 0.0;
  Mat G_j1;      // temporal Cartan block, identically zero
  Ten3 L;        // L^i_jk = n delta^i_j delta^i_k sigma_i
  Ten3 C;        // C^{i(1)}_{j(k)} = Cc^i_jk y^i/(y^j y^k)
};

inline std::pair<Vec, Vec> spray(const GeometryConfig& cfg, const JetPoint& p) {
  validate_point(cfg, p);
  const int n = cfg.n;
  TemporalData td = temporal_data(cfg, p.t);
  SigmaData sd = sigma_data(cfg, p.x);
  Vec H(std::size_t(n), 0.0), Gs(std::size_t(n), 0.0);
  for (int i = 0; i < n; ++i) {
    H[std::size_t(i)] = -0.5 * td.kappa * p.y[std::size_t(i)];
    Gs[std::size_t(i)] = 0.5 * n * sd.grad[std::size_t(i)] *
                         p.y[std::size_t(i)] * p.y[std::size_t(i)];
  }
  return {std::move(H), std::move(Gs)};
}

inline std::pair<Vec, Mat> nonlinear_connection(const GeometryConfig& cfg,
                                                const JetPoint& p) {
  validate_point(cfg, p);
  const int n = cfg.n;
  TemporalData td = temporal_data(cfg, p.t);
  SigmaData sd = sigma_data(cfg, p.x);
  Vec M(std::size_t(n), 0.0);
  Mat N(n);
  for (int i = 0; i < n; ++i) {
    M[std::size_t(i)] = -td.kappa * p.y[std::size_t(i)];
    N(i, i) = n * sd.grad[std::size_t(i)] * p.y[std::size_t(i)];
  }
  return {std::move(M), std::move(N)};
}

// Dimension-only coefficient table of the vertical Cartan components:
//   Cc^i_jk = -2/n^2 + (delta^i_j + delta^i_k + delta_jk)/n - delta^i_j delta^i_k,
// symmetric in (j,k).
inline Ten3 c_constants(int n) {
  if (n < 2) throw ConfigError("dimension must be >= 2");
  Ten3 c(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double dij = i == j ? 1.0 : 0.0;
        const double dik = i == k ? 1.0 : 0.0;
        const double djk = j == k ? 1.0 : 0.0;
        c(i, j, k) = -2.0 / (double(n) * n) + (dij + dik + djk) / n - dij * dik;
      }
  return c;
}

inline ConnectionBundle cartan(const GeometryConfig& cfg, const JetPoint& p) {
  validate_point(cfg, p);
  const int n = cfg.n;
  ConnectionBundle b;
  auto [H, Gs] = spray(cfg, p);
  auto [M, N] = nonlinear_connection(cfg, p);
  b.H = std::move(H);
  b.Gs = std::move(Gs);
  b.M = std::move(M);
  b.N = std::move(N);
  b.kappa = temporal_data(cfg, p.t).kappa;
  b.G_j1 = Mat(n);  // zero for this metric
  SigmaData sd = sigma_data(cfg, p.x);
  b.L = Ten3(n);
  for (int i = 0; i < n; ++i) b.L(i, i, i) = n * sd.grad[std::size_t(i)];
  const Ten3 cc = c_constants(n);
  b.C = Ten3(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        b.C(i, j, k) = cc(i, j, k) * p.y[std::size_t(i)] /
                       (p.y[std::size_t(j)] * p.y[std::size_t(k)]);
  return b;
}

// The two nonzero torsion tensors:
//   R^{(r)}_{(1)ij} = n (delta^r_i sigma_rj - delta^r_j sigma_ri) y^r
//   P^{r(1)}_{i(j)} = C^{r(1)}_{i(j)}
// R is antisymmetric in (i,j); the remaining six torsion families of the
// general theory vanish for this metric and are asserted zero in tests.
inline std::pair<Ten3, Ten3> torsions(const GeometryConfig& cfg,
                                      const JetPoint& p) {
  validate_point(cfg, p);
  const int n = cfg.n;
  SigmaData sd = sigma_data(cfg, p.x);
  Ten3 R(n);
  for (int r = 0; r < n; ++r)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double dri = r == i ? 1.0 : 0.0;
        const double drj = r == j ? 1.0 : 0.0;
        R(r, i, j) = n * (dri * sd.hess(r, j) - drj * sd.hess(r, i)) *
                     p.y[std::size_t(r)];
      }
  return {std::move(R), cartan(cfg, p).C};
}

}  // namespace jetbm
