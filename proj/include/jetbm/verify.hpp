#pragma once

// The check catalog: every invariant of the library run over seeded random
// points, each check reporting its worst deviation against a pinned
// tolerance.  The CLI `verify` subcommand and the acceptance suite both run
// through this code.
//
// Deviation conventions: closed-form vs. oracle comparisons and the large-
// magnitude identities use scaled_deviation (relative with an absolute
// floor of 1); structural zeros and small-scale identities are absolute.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "connection.hpp"
#include "core.hpp"
#include "curvature.hpp"
#include "fd.hpp"
#include "geodesic.hpp"
#include "geometry.hpp"
#include "oracle.hpp"
#include "sampling.hpp"

namespace jetbm {

struct CheckResult {
  std::string name;
  std::string anchor;  // the identity or definition the check exercises
  double max_dev = 0.0;
  double tol = 0.0;
  bool pass = true;
};

struct VerifyOptions {
  int samples = 100;
  std::uint64_t seed = 42;
  std::map<std::string, double> tolerance_overrides;  // by check name
};

namespace detail {

class CheckTable {
 public:
  void define(const std::string& name, const std::string& anchor, double tol,
              const std::map<std::string, double>& overrides) {
    auto it = overrides.find(name);
    checks_.push_back({name, anchor, 0.0, it == overrides.end() ? tol : it->second,
                       true});
    index_[name] = checks_.size() - 1;
  }

  void record(const std::string& name, double dev) {
    CheckResult& c = checks_[index_.at(name)];
    if (dev > c.max_dev) c.max_dev = dev;
  }

  std::vector<CheckResult> finish() {
    for (auto& c : checks_) c.pass = c.max_dev <= c.tol;
    return std::move(checks_);
  }

 private:
  std::vector<CheckResult> checks_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace detail

// Defaults for every check, kept in one record so nothing is scattered.
struct ToleranceSet {
  double metric_oracle = 1e-5;
  double metric_inverse = 1e-10;           // absolute
  double metric_energy = 1e-10;
  double metric_homogeneity = 1e-12;
  double spray_oracle = 1e-4;
  double spray_temporal = 1e-5;
  double nonlinear_spray_derivative = 1e-5;
  double nonlinear_oracle = 1e-3;          // second-level FD
  double cartan_L = 1e-5;
  double cartan_C = 1e-5;
  double cartan_time_block = 1e-6;         // absolute, structural zero
  double c_identities = 1e-10;             // absolute
  double torsion_antisymmetry = 0.0;       // exact
  double torsion_oracle = 1e-4;
  double curvature_R = 1e-5;
  double curvature_P = 1e-5;
  double curvature_S = 1e-4;
  double curvature_P_identity = 1e-12;
  double vertical_deflection = 0.0;        // exact
  double ricci_contraction = 1e-9;
  double ricci_diagonal = 0.0;             // exact
  double scalar_contraction = 1e-9;
  double einstein_tt_identity = 1e-10;
  double em_null = 1e-10;                  // absolute
  double stress_zeros = 1e-10;             // absolute (zero by construction)
  double conservation = 1e-5;              // absolute residuals
  double tensoriality = 1e-4;              // absolute max deviation
};

// Chart-change set used by the tensoriality sweep: first axis stretched by
// 2, a mixed (1,3,2,...) stretch, each with and without time rescaling.
inline std::vector<JetDiffeo> standard_diffeos(int n) {
  Vec a1(std::size_t(n), 1.0);
  a1[0] = 2.0;
  Vec a2(std::size_t(n), 1.0);
  a2[0] = 1.0;
  a2[1] = 3.0;
  if (n >= 3) a2[2] = 2.0;
  return {JetDiffeo{1.0, 0.0, a1}, JetDiffeo{2.0, 0.5, a1},
          JetDiffeo{1.0, 0.0, a2}, JetDiffeo{2.0, 0.5, a2}};
}

inline std::vector<CheckResult> run_verify_checks(const GeometryConfig& cfg,
                                                  const VerifyOptions& opt) {
  const int n = cfg.n;
  const ToleranceSet tol;
  const DiffScheme scheme{1e-5, 1e-4, /*richardson=*/true, 30};

  detail::CheckTable t;
  const auto& ov = opt.tolerance_overrides;
  t.define("metric-oracle", "g_ij = (h11/2) d2(F*^2)/dy^i dy^j",
           tol.metric_oracle, ov);
  t.define("metric-inverse", "g . g_inv = id", tol.metric_inverse, ov);
  t.define("metric-energy-identity", "g_ij y^i y^j = h11 F*^2",
           tol.metric_energy, ov);
  t.define("metric-homogeneity", "g(lambda y) = g(y), lambda in {0.5,2,10}",
           tol.metric_homogeneity, ov);
  t.define("spray-oracle", "G^i from the Euler-Lagrange bracket of F*^2",
           tol.spray_oracle, ov);
  t.define("spray-temporal-oracle",
           "H^i = -(1/2) kappa y^i with kappa = (h^11/2) dh11/dt (FD)",
           tol.spray_temporal, ov);
  t.define("nonlinear-spray-derivative", "N^i_j = dG^i/dy^j (closed spray)",
           tol.nonlinear_spray_derivative, ov);
  t.define("nonlinear-oracle", "N^i_j = dG^i/dy^j (oracle spray)",
           tol.nonlinear_oracle, ov);
  t.define("cartan-L-oracle",
           "L^i_jk = (g^im/2)(Dg_jm/Dx^k + Dg_km/Dx^j - Dg_jk/Dx^m)",
           tol.cartan_L, ov);
  t.define("cartan-C-oracle",
           "C^i_j(k) = (g^im/2)(dg_jm/dy^k + dg_km/dy^j - dg_jk/dy^m)",
           tol.cartan_C, ov);
  t.define("cartan-time-block", "(g^km/2) Dg_mj/Dt = 0", tol.cartan_time_block,
           ov);
  t.define("c-symmetry", "C^i_j(k) = C^i_k(j)", tol.c_identities, ov);
  t.define("c-y-contraction", "C^i_j(m) y^m = 0", tol.c_identities, ov);
  t.define("c-trace", "C^m_j(m) = 0", tol.c_identities, ov);
  t.define("c-covariant-trace", "C^m_i(k)|m = 0", tol.c_identities, ov);
  t.define("torsion-antisymmetry", "R^r_(1)ij = -R^r_(1)ji",
           tol.torsion_antisymmetry, ov);
  t.define("torsion-oracle", "R^r_(1)ij = DN^r_i/Dx^j - DN^r_j/Dx^i",
           tol.torsion_oracle, ov);
  t.define("curvature-R-oracle", "R^l_ijk from DL/Dx + LL + C R terms",
           tol.curvature_R, ov);
  t.define("curvature-P-oracle", "P^l_ij(k) = dL/dy - C| + C(dN/dy - L)",
           tol.curvature_P, ov);
  t.define("curvature-S-oracle", "S^l_i(j)(k) from dC/dy + CC terms",
           tol.curvature_S, ov);
  t.define("curvature-P-identity", "P^l_ij(k) = -C^l_i(k)|j",
           tol.curvature_P_identity, ov);
  t.define("vertical-deflection-zero", "dN^r_j/dy^k - L^r_jk = 0",
           tol.vertical_deflection, ov);
  t.define("ricci-contraction", "R_ij = R^m_ijm and S_(i)(j) = S^m_i(j)(m)",
           tol.ricci_contraction, ov);
  t.define("ricci-diagonal-zero", "R_ii = 0", tol.ricci_diagonal, ov);
  t.define("scalar-curvature-contraction",
           "Sc = g^pq R_pq + h11 g^pq S_(p)(q)", tol.scalar_contraction, ov);
  t.define("einstein-tt-identity", "tt block = -(Sc/2) h11",
           tol.einstein_tt_identity, ov);
  t.define("em-null", "F_(i)j = 0", tol.em_null, ov);
  t.define("stress-zero-blocks", "T_tx,T_xt,T_vt,T_tv,T_xv,T_vx = 0",
           tol.stress_zeros, ov);
  t.define("conservation-t", "temporal conservation law residual",
           tol.conservation, ov);
  t.define("conservation-x", "horizontal conservation law residual",
           tol.conservation, ov);
  t.define("conservation-v", "vertical conservation law residual",
           tol.conservation, ov);
  t.define("tensoriality", "pullback of g under diagonal jet chart changes",
           tol.tensoriality, ov);

  const std::vector<JetDiffeo> diffeos = standard_diffeos(n);
  PointSampler sampler(n, opt.seed);
  for (int s = 0; s < opt.samples; ++s) {
    const JetPoint p = sampler.next();

    // closed forms
    SpatialMetric met = metric(cfg, p);
    TemporalData td = temporal_data(cfg, p.t);
    ConnectionBundle cb = cartan(cfg, p);
    auto [Rtor, Ptor] = torsions(cfg, p);
    CurvatureBundle curv = curvature_tensors(cfg, p);
    auto [ricR, ricS] = ricci(cfg, p);
    auto [Sc, Y11] = scalar_curvature(cfg, p);
    EinsteinBlocks blocks = einstein_blocks(cfg, p);
    StressEnergy se = stress_energy(cfg, p);
    Ten4 covC = covariant_C_derivative(cfg, p);

    // metric family
    t.record("metric-oracle", scaled_deviation(met.g, oracle_metric(cfg, p, scheme)));
    {
      double dev = 0.0, edev = 0.0;
      double yy = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double prod = 0.0;
          for (int m = 0; m < n; ++m) prod += met.g(i, m) * met.g_inv(m, j);
          dev = std::max(dev, std::abs(prod - (i == j ? 1.0 : 0.0)));
          yy += met.g(i, j) * p.y[std::size_t(i)] * p.y[std::size_t(j)];
        }
      t.record("metric-inverse", dev);
      const double rhs = td.h11 * met.fstar * met.fstar;
      edev = std::abs(yy - rhs) / std::max(1.0, std::abs(rhs));
      t.record("metric-energy-identity", edev);
      for (double lambda : {0.5, 2.0, 10.0}) {
        JetPoint q = p;
        for (auto& v : q.y) v *= lambda;
        t.record("metric-homogeneity", scaled_deviation(metric(cfg, q).g, met.g));
      }
    }

    // connection family
    t.record("spray-oracle", scaled_deviation(cb.Gs, oracle_spray(cfg, p, scheme)));
    {
      const double kappa_fd =
          0.5 * td.h11_inv *
          fd::first([&](double tt) { return cfg.h11({tt}); }, p.t, scheme);
      Vec H_fd(std::size_t(n), 0.0);
      for (int i = 0; i < n; ++i)
        H_fd[std::size_t(i)] = -0.5 * kappa_fd * p.y[std::size_t(i)];
      t.record("spray-temporal-oracle", scaled_deviation(cb.H, H_fd));
    }
    t.record("nonlinear-spray-derivative",
             scaled_deviation(cb.N, oracle_nonlinear(cfg, p, scheme,
                                                     SpraySource::closed_form)));
    t.record("nonlinear-oracle",
             scaled_deviation(cb.N, oracle_nonlinear(cfg, p, scheme,
                                                     SpraySource::oracle)));
    OracleCartan oc = oracle_cartan(cfg, p, scheme);
    t.record("cartan-L-oracle", scaled_deviation(cb.L, oc.L));
    t.record("cartan-C-oracle", scaled_deviation(cb.C, oc.C));
    t.record("cartan-time-block", max_abs(oc.G_time));
    {
      double sym = 0.0, ycon = 0.0, trace = 0.0, covtr = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k)
            sym = std::max(sym, std::abs(cb.C(i, j, k) - cb.C(i, k, j)));
          double yc = 0.0, ct = 0.0;
          for (int m = 0; m < n; ++m) {
            yc += cb.C(i, j, m) * p.y[std::size_t(m)];
            ct += cb.C(m, j, m);
          }
          ycon = std::max(ycon, std::abs(yc));
          if (i == 0) trace = std::max(trace, std::abs(ct));
          double cv = 0.0;
          for (int m = 0; m < n; ++m) cv += covC(m, i, j, m);
          covtr = std::max(covtr, std::abs(cv));
        }
      t.record("c-symmetry", sym);
      t.record("c-y-contraction", ycon);
      t.record("c-trace", trace);
      t.record("c-covariant-trace", covtr);
    }
    {
      double anti = 0.0;
      for (int r = 0; r < n; ++r)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            anti = std::max(anti, std::abs(Rtor(r, i, j) + Rtor(r, j, i)));
      t.record("torsion-antisymmetry", anti);
    }

    // curvature family
    OracleCurvatures ocv = oracle_curvatures(cfg, p, scheme);
    t.record("torsion-oracle", scaled_deviation(Rtor, ocv.torsion_R));
    t.record("curvature-R-oracle", scaled_deviation(curv.R_curv, ocv.R));
    t.record("curvature-P-oracle", scaled_deviation(curv.P_curv, ocv.P));
    t.record("curvature-S-oracle", scaled_deviation(curv.S_curv, ocv.S));
    {
      // Both routes cancel to rounding; normalize by the size of the terms
      // that cancel so the comparison stays meaningful at large |C| |L|.
      double dev = 0.0;
      for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              dev = std::max(dev, std::abs(curv.P_curv(l, i, j, k) +
                                           covC(l, i, k, j)));
      const double scale =
          std::max(1.0, max_abs(cb.C) * (1.0 + max_abs(cb.L)));
      t.record("curvature-P-identity", dev / scale);
      t.record("vertical-deflection-zero", max_abs(vertical_deflection(cfg, p)));
    }
    {
      auto [cR, cS] = ricci_from_contraction(curv);
      double dev = std::max(scaled_deviation(ricR, cR), scaled_deviation(ricS, cS));
      t.record("ricci-contraction", dev);
      double diag = 0.0;
      for (int i = 0; i < n; ++i) diag = std::max(diag, std::abs(ricR(i, i)));
      t.record("ricci-diagonal-zero", diag);
      t.record("scalar-curvature-contraction",
               scaled_deviation(Sc, scalar_curvature_from_contraction(cfg, p)));
      t.record("einstein-tt-identity",
               scaled_deviation(blocks.lhs_tt, -0.5 * Sc * td.h11));
    }
    t.record("em-null", max_abs(em_tensor(cfg, p)));
    {
      double z = 0.0;
      z = std::max(z, max_abs(se.Tx_t));
      z = std::max(z, max_abs(se.Tv_t));
      z = std::max(z, max_abs(se.Tt_x));
      z = std::max(z, max_abs(se.Tv_x));
      z = std::max(z, max_abs(se.Tt_v));
      z = std::max(z, max_abs(se.Tx_v));
      for (const auto& [name, value] : se.zero_blocks)
        z = std::max(z, std::abs(value));
      t.record("stress-zero-blocks", z);
    }
    {
      auto res = conservation_residuals(cfg, p);
      t.record("conservation-t", res[0]);
      t.record("conservation-x", res[1]);
      t.record("conservation-v", res[2]);
    }
    // The residual itself is an absolute max deviation; the catalog entry
    // normalizes by the metric scale at the point so hot corners (|g| ~ 1e4)
    // are judged by the same yardstick as moderate ones.
    const double gscale = std::max(1.0, max_abs(met.g));
    for (const auto& d : diffeos)
      t.record("tensoriality", tensoriality_residual(cfg, d, p, scheme) / gscale);
  }
  return t.finish();
}

}  // namespace jetbm
