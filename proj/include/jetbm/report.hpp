#pragma once

// Run configuration and report serialization.  Both formats are a single
// JSON object per file with fixed key order, so reports are diffable and a
// fixed seed reproduces a byte-identical file.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "connection.hpp"
#include "core.hpp"
#include "curvature.hpp"
#include "geodesic.hpp"
#include "geometry.hpp"
#include "verify.hpp"

namespace jetbm {

using Json = nlohmann::ordered_json;

struct GeodesicSpec {
  double t0 = 0.0;
  double t1 = 1.0;
  int steps = 0;
  Vec x0;
  Vec y0;
};

struct RunConfig {
  int n = 0;
  std::string sigma;
  std::string h11;
  double K = 1.0;
  std::vector<JetPoint> points;
  VerifyOptions verify;
  std::optional<GeodesicSpec> geodesic;
  std::string output = "report.json";

  GeometryConfig geometry() const { return GeometryConfig::make(n, sigma, h11, K); }
};

// Exit status contract shared by every subcommand.
enum ExitCode : int { exit_ok = 0, exit_check_failure = 1, exit_config_error = 2 };

struct RunResult {
  Json report;
  int exit_code = exit_ok;
};

namespace io {

inline Vec to_vec(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array");
  Vec v;
  for (const auto& e : j) {
    if (!e.is_number()) throw ConfigError(what + " must hold numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

inline RunConfig parse_run_config(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  if (!j.contains("geometry")) throw ConfigError("missing geometry section");
  const Json& g = j.at("geometry");
  if (!g.contains("n") || !g.at("n").is_number_integer())
    throw ConfigError("geometry.n must be an integer");
  c.n = g.at("n").get<int>();
  if (!g.contains("sigma") || !g.at("sigma").is_string())
    throw ConfigError("geometry.sigma must be a string expression");
  c.sigma = g.at("sigma").get<std::string>();
  if (!g.contains("h11") || !g.at("h11").is_string())
    throw ConfigError("geometry.h11 must be a string expression");
  c.h11 = g.at("h11").get<std::string>();
  c.K = g.value("K", 1.0);

  if (j.contains("points")) {
    for (const auto& pj : j.at("points")) {
      JetPoint p;
      p.t = pj.value("t", 0.0);
      p.x = to_vec(pj.at("x"), "points[].x");
      p.y = to_vec(pj.at("y"), "points[].y");
      c.points.push_back(std::move(p));
    }
  }
  if (j.contains("verify")) {
    const Json& v = j.at("verify");
    c.verify.samples = v.value("samples", 100);
    c.verify.seed = v.value("seed", std::uint64_t(42));
    if (v.contains("tolerances"))
      for (const auto& [name, value] : v.at("tolerances").items())
        c.verify.tolerance_overrides[name] = value.get<double>();
    if (c.verify.samples <= 0) throw ConfigError("verify.samples must be positive");
  }
  if (j.contains("geodesic")) {
    const Json& gg = j.at("geodesic");
    GeodesicSpec spec;
    spec.t0 = gg.value("t0", 0.0);
    spec.t1 = gg.value("t1", 1.0);
    spec.steps = gg.value("steps", 0);
    spec.x0 = to_vec(gg.at("x0"), "geodesic.x0");
    spec.y0 = to_vec(gg.at("y0"), "geodesic.y0");
    c.geodesic = std::move(spec);
  }
  c.output = j.value("output", std::string("report.json"));

  // Surface expression and dimension problems at parse time; per-point
  // domain violations are left for eval, which reports them point by point
  // and keeps going.
  (void)c.geometry();
  return c;
}

inline RunConfig parse_run_config(const std::string& text) {
  Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ConfigError("config is not valid JSON");
  return parse_run_config(j);
}

inline Json config_echo(const RunConfig& c) {
  Json g{{"n", c.n}, {"sigma", c.sigma}, {"h11", c.h11}, {"K", c.K}};
  Json out{{"geometry", std::move(g)}};
  Json pts = Json::array();
  for (const auto& p : c.points) pts.push_back({{"t", p.t}, {"x", p.x}, {"y", p.y}});
  out["points"] = std::move(pts);
  Json v{{"samples", c.verify.samples}, {"seed", c.verify.seed}};
  Json tols = Json::object();
  for (const auto& [name, value] : c.verify.tolerance_overrides) tols[name] = value;
  v["tolerances"] = std::move(tols);
  out["verify"] = std::move(v);
  if (c.geodesic) {
    const auto& s = *c.geodesic;
    out["geodesic"] = {{"t0", s.t0}, {"t1", s.t1}, {"steps", s.steps},
                       {"x0", s.x0}, {"y0", s.y0}};
  }
  out["output"] = c.output;
  return out;
}

inline Json to_json(const Mat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(const Ten3& t) {
  Json out = Json::array();
  for (int l = 0; l < t.dim(); ++l) {
    Json plane = Json::array();
    for (int i = 0; i < t.dim(); ++i) {
      Json row = Json::array();
      for (int j = 0; j < t.dim(); ++j) row.push_back(t(l, i, j));
      plane.push_back(std::move(row));
    }
    out.push_back(std::move(plane));
  }
  return out;
}

inline Json to_json(const Ten4& t) {
  Json out = Json::array();
  for (int l = 0; l < t.dim(); ++l) {
    Json cube = Json::array();
    for (int i = 0; i < t.dim(); ++i) {
      Json plane = Json::array();
      for (int j = 0; j < t.dim(); ++j) {
        Json row = Json::array();
        for (int k = 0; k < t.dim(); ++k) row.push_back(t(l, i, j, k));
        plane.push_back(std::move(row));
      }
      cube.push_back(std::move(plane));
    }
    out.push_back(std::move(cube));
  }
  return out;
}

inline Json point_payload(const GeometryConfig& geom, const JetPoint& p) {
  Json out{{"t", p.t}, {"x", p.x}, {"y", p.y}};
  SpatialMetric met = metric(geom, p);
  ConnectionBundle cb = cartan(geom, p);
  auto [Rtor, Ptor] = torsions(geom, p);
  CurvatureBundle curv = curvature_tensors(geom, p);
  auto [ricR, ricS] = ricci(geom, p);
  auto [Sc, Y11] = scalar_curvature(geom, p);
  EinsteinBlocks blocks = einstein_blocks(geom, p);
  StressEnergy se = stress_energy(geom, p);

  out["fstar"] = met.fstar;
  out["energy_density"] = energy_density(geom, p);
  out["g"] = to_json(met.g);
  out["g_inv"] = to_json(met.g_inv);
  out["G_product"] = met.G_product;
  out["kappa"] = cb.kappa;
  out["spray_H"] = cb.H;
  out["spray_G"] = cb.Gs;
  out["M"] = cb.M;
  out["N"] = to_json(cb.N);
  out["G_j1"] = to_json(cb.G_j1);
  out["L"] = to_json(cb.L);
  out["C"] = to_json(cb.C);
  out["torsion_R"] = to_json(Rtor);
  out["torsion_P"] = to_json(Ptor);
  out["curv_R"] = to_json(curv.R_curv);
  out["curv_P"] = to_json(curv.P_curv);
  out["curv_S"] = to_json(curv.S_curv);
  out["ricci_R"] = to_json(ricR);
  out["ricci_S"] = to_json(ricS);
  out["Y11"] = Y11;
  out["scalar_curvature"] = Sc;
  out["einstein_tt"] = blocks.lhs_tt;
  out["einstein_xx"] = to_json(blocks.lhs_xx);
  out["einstein_vv"] = to_json(blocks.lhs_vv);
  Json stress{{"T11", se.T11},
              {"T_x", to_json(se.T_x)},
              {"T_v", to_json(se.T_v)},
              {"Tt_t", se.Tt_t},
              {"Tx_t", se.Tx_t},
              {"Tv_t", se.Tv_t},
              {"Tt_x", se.Tt_x},
              {"E", to_json(se.E)},
              {"Tv_x", to_json(se.Tv_x)},
              {"Tt_v", se.Tt_v},
              {"Tx_v", to_json(se.Tx_v)},
              {"Tv_v", to_json(se.Tv_v)}};
  Json zeros = Json::object();
  for (const auto& [name, value] : se.zero_blocks) zeros[name] = value;
  stress["zero_blocks"] = std::move(zeros);
  out["stress_energy"] = std::move(stress);
  auto cons = conservation_residuals(geom, p);
  out["conservation_residuals"] = {cons[0], cons[1], cons[2]};
  out["em_F"] = to_json(em_tensor(geom, p));
  return out;
}

inline Json report_shell(const RunConfig& c) {
  Json meta{{"version", version}, {"seed", c.verify.seed}, {"config", config_echo(c)}};
  return Json{{"meta", std::move(meta)},
              {"points", Json::array()},
              {"checks", Json::array()},
              {"trajectory", Json::array()}};
}

}  // namespace io

// eval: tensor payloads for every configured point.  A domain violation at
// one point is recorded in that point's entry and the run continues.
inline RunResult run_eval(const RunConfig& c) {
  GeometryConfig geom = c.geometry();
  RunResult r;
  r.report = io::report_shell(c);
  for (const auto& p : c.points) {
    try {
      r.report["points"].push_back(io::point_payload(geom, p));
    } catch (const DomainError& e) {
      r.report["points"].push_back(
          Json{{"t", p.t}, {"x", p.x}, {"y", p.y}, {"error", e.what()}});
      r.exit_code = exit_config_error;
    }
  }
  return r;
}

// verify: the full check catalog over seeded random points.
inline RunResult run_verify(const RunConfig& c) {
  GeometryConfig geom = c.geometry();
  RunResult r;
  r.report = io::report_shell(c);
  std::vector<CheckResult> checks = run_verify_checks(geom, c.verify);
  bool all_pass = true;
  for (const auto& ck : checks) {
    r.report["checks"].push_back(Json{{"name", ck.name},
                                      {"anchor", ck.anchor},
                                      {"max_dev", ck.max_dev},
                                      {"tol", ck.tol},
                                      {"pass", ck.pass}});
    all_pass = all_pass && ck.pass;
  }
  r.exit_code = all_pass ? exit_ok : exit_check_failure;
  return r;
}

// geodesic: integrate the configured problem and append the trajectory.
inline RunResult run_geodesic(const RunConfig& c) {
  if (!c.geodesic) throw ConfigError("config has no geodesic section");
  GeometryConfig geom = c.geometry();
  const GeodesicSpec& s = *c.geodesic;
  GeodesicProblem prob{geom, s.t0, s.t1, s.x0, s.y0, s.steps};
  RunResult r;
  r.report = io::report_shell(c);
  Trajectory traj = integrate(prob);
  for (const auto& sample : traj.samples)
    r.report["trajectory"].push_back(
        Json{{"t", sample.t}, {"x", sample.x}, {"y", sample.y}});
  r.report["step"] = traj.step;
  if (!traj.complete) {
    r.report["geodesic_error"] = traj.failure;
    r.exit_code = exit_config_error;
  } else {
    r.report["el_residual"] = el_residual(prob, traj);
  }
  return r;
}

// One object per file, two-space indent, trailing newline; fixed key order
// makes equal-seed runs byte-identical.
inline std::string serialize_report(const Json& report) {
  return report.dump(2) + "\n";
}

}  // namespace jetbm
