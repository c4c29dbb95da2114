// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion.  Exit status is nonzero when
// any criterion fails.

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <jetbm/jetbm.hpp>

namespace {

using namespace jetbm;

struct Criterion {
  std::string label;
  bool pass = true;
  double worst = 0.0;
  std::vector<std::string> notes;

  void fold(bool ok, double dev, const std::string& note) {
    if (dev > worst) worst = dev;
    if (!ok) {
      pass = false;
      notes.push_back(note);
    }
  }
};

struct MatrixConfig {
  int n;
  std::string sigma;
  std::string h11;
};

std::vector<MatrixConfig> acceptance_matrix() {
  std::vector<MatrixConfig> out;
  for (int n : {2, 3, 4, 5})
    for (const std::string& s :
         {std::string("0"), std::string("x1"), std::string("x1*x2"),
          std::string("x1+2*x2*x3")})
      for (const std::string& h : {std::string("1"), std::string("exp(2*t)")}) {
        if (s == "x1+2*x2*x3" && n < 3) continue;
        out.push_back({n, s, h});
      }
  return out;
}

const std::set<std::string> kOracleChecks{
    "metric-oracle",        "spray-oracle",
    "spray-temporal-oracle",
    "nonlinear-spray-derivative", "nonlinear-oracle",
    "cartan-L-oracle",      "cartan-C-oracle",
    "torsion-oracle",       "curvature-R-oracle",
    "curvature-P-oracle",   "curvature-S-oracle",
    "ricci-contraction",    "scalar-curvature-contraction"};

const std::set<std::string> kIdentityChecks{
    "metric-inverse",    "metric-energy-identity", "metric-homogeneity",
    "c-symmetry",        "c-y-contraction",        "c-trace",
    "c-covariant-trace", "einstein-tt-identity",   "curvature-P-identity",
    "torsion-antisymmetry"};

const std::set<std::string> kZeroChecks{
    "cartan-time-block", "vertical-deflection-zero", "ricci-diagonal-zero",
    "em-null",           "stress-zero-blocks"};

const std::set<std::string> kConservationChecks{
    "conservation-t", "conservation-x", "conservation-v"};

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

int main() {
  std::vector<Criterion> criteria(8);
  criteria[0].label = "1. oracle equivalence over the configuration matrix";
  criteria[1].label = "2. algebraic identities";
  criteria[2].label = "3. structural zeros";
  criteria[3].label = "4. closed-value spot checks";
  criteria[4].label = "5. conservation laws (residuals <= 1e-5)";
  criteria[5].label = "6. tensoriality under diagonal chart changes (<= 1e-4)";
  criteria[6].label = "7. geodesics (exactness, order >= 3.5, residual <= 1e-5)";
  criteria[7].label = "8. determinism (byte-identical verify reports)";

  // ---- criteria 1, 2, 3, 5: the full configuration matrix -----------------
  {
    const auto matrix = acceptance_matrix();
    int idx = 0;
    for (const auto& mc : matrix) {
      GeometryConfig cfg = GeometryConfig::make(mc.n, mc.sigma, mc.h11);
      VerifyOptions opt;
      opt.samples = 100;
      opt.seed = 42 + std::uint64_t(idx++);
      const std::string tag = " [n=" + std::to_string(mc.n) + " sigma=" +
                              mc.sigma + " h11=" + mc.h11 + "]";
      for (const CheckResult& ck : run_verify_checks(cfg, opt)) {
        const std::string note = ck.name + " dev=" + std::to_string(ck.max_dev) + tag;
        if (kOracleChecks.count(ck.name)) criteria[0].fold(ck.pass, ck.max_dev, note);
        if (kIdentityChecks.count(ck.name)) criteria[1].fold(ck.pass, ck.max_dev, note);
        if (kZeroChecks.count(ck.name)) criteria[2].fold(ck.pass, ck.max_dev, note);
        if (kConservationChecks.count(ck.name))
          criteria[4].fold(ck.pass, ck.max_dev, note);
      }
    }
  }

  // ---- criterion 4: frozen closed values ----------------------------------
  {
    Criterion& c = criteria[3];
    auto flat3 = GeometryConfig::make(3, "0", "1");
    auto [sc0, y0] = scalar_curvature(flat3, {0, {0, 0, 0}, {1, 1, 1}});
    c.fold(close(sc0, -2.0, 1e-12), std::abs(sc0 + 2.0), "Sc(flat n=3) != -2");
    (void)y0;

    auto cxy = GeometryConfig::make(3, "x1*x2", "1");
    JetPoint p{0, {0, 0, 0}, {1, 1, 1}};
    auto [sc1, y1] = scalar_curvature(cxy, p);
    c.fold(close(y1, 1.0, 1e-12), std::abs(y1 - 1.0), "Y11 != 1");
    c.fold(close(sc1, -14.0, 1e-12), std::abs(sc1 + 14.0), "Sc != -14");
    EinsteinBlocks eb = einstein_blocks(cxy, p);
    c.fold(close(eb.lhs_tt, 7.0, 1e-12), std::abs(eb.lhs_tt - 7.0), "tt block != 7");
    auto [R, S] = ricci(cxy, p);
    (void)S;
    c.fold(close(R(0, 1), -2.0, 1e-12), std::abs(R(0, 1) + 2.0), "R_12 != -2");

    auto const2 = GeometryConfig::make(2, "3", "1");
    PointSampler sampler(2, 5);
    for (int s = 0; s < 25; ++s) {
      JetPoint q = sampler.next();
      auto [sc2, y2] = scalar_curvature(const2, q);
      (void)y2;
      auto [r2, s2] = ricci(const2, q);
      (void)r2;
      c.fold(close(sc2, 0.0, 1e-12), std::abs(sc2), "Sc(n=2, const sigma) != 0");
      c.fold(max_abs(s2) <= 1e-12, max_abs(s2), "vertical Ricci (n=2) != 0");
    }
  }

  // ---- criterion 6: tensoriality with the pinned chart changes ------------
  {
    Criterion& c = criteria[5];
    const DiffScheme scheme{1e-5, 1e-4, true, 30};
    const std::vector<GeometryConfig> cfgs{
        GeometryConfig::make(3, "x1", "1"),
        GeometryConfig::make(3, "x1*x2", "exp(2*t)")};
    const std::vector<Vec> axes{{2, 1, 1}, {1, 3, 2}};
    for (const auto& cfg : cfgs) {
      PointSampler sampler(3, 2026);
      for (int s = 0; s < 25; ++s) {
        JetPoint p = sampler.next();
        for (const Vec& a : axes)
          for (double cc : {1.0, 2.0}) {
            const double dev =
                tensoriality_residual(cfg, JetDiffeo{cc, 0.0, a}, p, scheme);
            c.fold(dev <= 1e-4, dev, "pullback residual over 1e-4");
          }
      }
    }
  }

  // ---- criterion 7: geodesics ---------------------------------------------
  {
    Criterion& c = criteria[6];
    GeodesicProblem straight{GeometryConfig::make(3, "0", "1"), 0.0, 1.0,
                             {0, 0, 0}, {1, 2, 4}, 100};
    Trajectory ts = integrate(straight);
    double err = 0.0;
    for (int i = 0; i < 3; ++i)
      err = std::max(err, std::abs(ts.samples.back().x[std::size_t(i)] -
                                   straight.y0[std::size_t(i)]));
    c.fold(err <= 1e-10, err, "straight line error over 1e-10");

    auto cx = GeometryConfig::make(3, "x1", "1");
    auto final_x1 = [&](int steps) {
      GeodesicProblem prob{cx, 0.0, 1.0, {0, 0, 0}, {1, 1, 1}, steps};
      return integrate(prob).samples.back().x[0];
    };
    const double ref = final_x1(4000);
    const double order =
        std::log2(std::abs(final_x1(50) - ref) / std::abs(final_x1(100) - ref));
    c.fold(order >= 3.5, std::max(0.0, 3.5 - order),
           "RK4 observed order below 3.5 (order " + std::to_string(order) + ")");

    GeodesicProblem fine{cx, 0.0, 1.0, {0, 0, 0}, {0.5, 1, 1}, 1000};
    const double res = el_residual(fine, integrate(fine));
    c.fold(res <= 1e-5, res, "EL residual over 1e-5 at 1000 steps");
  }

  // ---- criterion 8: determinism -------------------------------------------
  {
    Criterion& c = criteria[7];
    RunConfig rc = io::parse_run_config(std::string(R"json({
      "geometry": { "n": 3, "sigma": "x1*x2", "h11": "exp(2*t)", "K": 1.0 },
      "verify": { "samples": 100, "seed": 42 }
    })json"));
    RunResult a = run_verify(rc);
    RunResult b = run_verify(rc);
    const bool same = serialize_report(a.report) == serialize_report(b.report);
    c.fold(same, same ? 0.0 : 1.0, "reports differ under a fixed seed");
    c.fold(a.exit_code == exit_ok, double(a.exit_code),
           "default verify config does not pass");
  }

  int failures = 0;
  for (const auto& c : criteria) {
    std::printf("[%s] %s (worst dev %.3e)\n", c.pass ? "PASS" : "FAIL",
                c.label.c_str(), c.worst);
    if (!c.pass) {
      ++failures;
      for (const auto& n : c.notes) std::printf("       %s\n", n.c_str());
    }
  }
  return failures == 0 ? 0 : 1;
}
