#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <jetbm/oracle.hpp>
#include <jetbm/sampling.hpp>

using namespace jetbm;
using Catch::Approx;

TEST_CASE("definitional metric") {
  auto c3 = GeometryConfig::make(3, "0", "1");
  JetPoint u{0, {0, 0, 0}, {1, 1, 1}};
  CHECK(scaled_deviation(oracle_metric(c3, u), metric(c3, u).g) < 1e-5);

  auto c2 = GeometryConfig::make(2, "0", "1");
  Mat g2 = oracle_metric(c2, {0, {0, 0}, {1, 1}});
  CHECK(g2(0, 0) == Approx(0.0).margin(1e-5));
  CHECK(g2(0, 1) == Approx(0.5).margin(1e-5));

  // homogeneity through the FD route
  auto cfg = GeometryConfig::make(3, "x1*x2", "exp(2*t)");
  JetPoint p{0.3, {0.2, -0.4, 0.1}, {1.5, 0.7, 2.0}};
  JetPoint q = p;
  for (auto& v : q.y) v *= 2.0;
  CHECK(max_abs_diff(oracle_metric(cfg, q), oracle_metric(cfg, p)) < 1e-4);
}

TEST_CASE("definitional spray") {
  auto flat = GeometryConfig::make(3, "0", "1");
  JetPoint p{0.2, {0.1, 0.2, 0.3}, {1, 2, 4}};
  CHECK(max_abs(oracle_spray(flat, p)) < 1e-6);

  auto cx = GeometryConfig::make(3, "x1", "1");
  Vec G = oracle_spray(cx, {0, {0, 0, 0}, {2, 1, 1}});
  CHECK(G[0] == Approx(6.0).margin(1e-4));
  CHECK(G[1] == Approx(0.0).margin(1e-4));
  CHECK(G[2] == Approx(0.0).margin(1e-4));

  // the kappa terms of the bracket cancel
  auto ct = GeometryConfig::make(3, "0", "exp(2*t)");
  CHECK(max_abs(oracle_spray(ct, {0.4, {0, 0, 0}, {2, 1, 1}})) < 1e-4);
}

TEST_CASE("definitional nonlinear connection") {
  auto flat = GeometryConfig::make(3, "0", "1");
  JetPoint p{0, {0.1, 0.2, 0.3}, {1, 2, 4}};
  CHECK(max_abs(oracle_nonlinear(flat, p)) < 1e-4);

  auto cx = GeometryConfig::make(3, "x1", "1");
  Mat N = oracle_nonlinear(cx, {0, {0, 0, 0}, {2, 1, 1}});
  CHECK(N(0, 0) == Approx(6.0).margin(1e-3));
  CHECK(N(1, 1) == Approx(0.0).margin(1e-3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(std::abs(N(i, j)) < 1e-3);
}

TEST_CASE("definitional Cartan components") {
  auto cx = GeometryConfig::make(3, "x1", "1");
  JetPoint p{0, {0, 0, 0}, {1, 1, 1}};
  OracleCartan oc = oracle_cartan(cx, p);
  CHECK(oc.L(0, 0, 0) == Approx(3.0).margin(1e-4));
  CHECK(oc.C(0, 1, 1) == Approx(1.0 / 9).margin(1e-5));

  auto ct = GeometryConfig::make(3, "x1*x2", "exp(2*t)");
  JetPoint q{0.3, {0.2, 0.1, -0.3}, {1, 2, 4}};
  CHECK(max_abs(oracle_cartan(ct, q).G_time) < 1e-6);

  // the oracle-g source feeds second-level differences through the same display
  CHECK(scaled_deviation(
            oracle_cartan(cx, p, DiffScheme{}, MetricSource::oracle).L,
            cartan(cx, p).L) < 1e-3);
}

TEST_CASE("definitional curvatures") {
  auto flat = GeometryConfig::make(3, "0", "1");
  JetPoint p{0, {0.1, -0.1, 0.2}, {1, 2, 4}};
  OracleCurvatures oc = oracle_curvatures(flat, p);
  CHECK(max_abs(oc.torsion_R) < 1e-5);
  CHECK(max_abs(oc.R) < 1e-5);
  CHECK(max_abs(oc.P) < 1e-5);

  auto cxy = GeometryConfig::make(3, "x1*x2", "1");
  JetPoint q{0, {0, 0, 0}, {1, 1, 1}};
  OracleCurvatures od = oracle_curvatures(cxy, q);
  CHECK(od.torsion_R(0, 0, 1) == Approx(3.0).margin(1e-4));
  CHECK(scaled_deviation(od.S, curvature_tensors(cxy, q).S_curv) < 1e-4);
  CHECK(scaled_deviation(od.R, curvature_tensors(cxy, q).R_curv) < 1e-4);
}

TEST_CASE("first derivatives converge at second order") {
  auto cfg = GeometryConfig::make(3, "sin(x1)+x1*x2", "exp(2*t)");
  JetPoint p{0.4, {0.3, -0.2, 0.5}, {1.2, 0.8, 1.6}};
  auto field = [&](double v) {
    JetPoint q = p;
    q.y[0] = v;
    return fstar_squared(cfg, q);
  };
  double prev = 0.0, order_min = 10.0;
  std::vector<double> values;
  for (double eps : {4e-4, 2e-4, 1e-4, 5e-5}) {
    DiffScheme s{eps, 1e-4, false, 30};
    values.push_back(fd::first(field, p.y[0], s));
  }
  (void)prev;
  for (std::size_t k = 0; k + 2 < values.size(); ++k) {
    const double e1 = std::abs(values[k] - values[k + 1]);
    const double e2 = std::abs(values[k + 1] - values[k + 2]);
    order_min = std::min(order_min, std::log2(e1 / e2));
  }
  CHECK(order_min >= 1.8);
}

TEST_CASE("stencils shrink at the domain boundary") {
  auto cfg = GeometryConfig::make(3, "0", "1");
  // y1 far below the default step: the stencil must shrink, not throw
  JetPoint p{0, {0, 0, 0}, {1e-7, 1.0, 1.0}};
  CHECK_NOTHROW(oracle_metric(cfg, p));

  DiffScheme no_shrink{1e-5, 1e-4, false, 0};
  CHECK_THROWS_AS(oracle_metric(cfg, p, no_shrink), DomainError);
}

TEST_CASE("chart-change point transport") {
  JetPoint p{0.5, {1.0, 2.0, 3.0}, {1, 1, 1}};
  JetDiffeo id{1.0, 0.0, {1, 1, 1}};
  JetPoint q = transform_point(p, id);
  CHECK(q.t == p.t);
  CHECK(q.x == p.x);
  CHECK(q.y == p.y);

  JetDiffeo time2{2.0, 0.0, {1, 1, 1}};
  JetPoint r = transform_point(p, time2);
  CHECK(r.t == 1.0);
  for (int i = 0; i < 3; ++i) CHECK(r.y[std::size_t(i)] == 0.5);

  JetDiffeo stretch{1.0, 0.0, {2, 3, 1}};
  JetPoint s = transform_point(p, stretch);
  CHECK(s.y == Vec{2, 3, 1});
  CHECK(s.x == Vec{2, 6, 3});

  CHECK_THROWS_AS(transform_point(p, JetDiffeo{0.0, 0.0, {1, 1, 1}}), ConfigError);
  CHECK_THROWS_AS(transform_point(p, JetDiffeo{1.0, 0.0, {1, 0, 1}}), ConfigError);
}

TEST_CASE("chart-change geometry transport") {
  auto cfg = GeometryConfig::make(3, "0", "exp(2*t)");

  // h11 transforms with 1/c^2 through the inverse time map
  JetDiffeo d{2.0, 0.5, {1, 1, 1}};
  GeometryConfig tcfg = transform_config(cfg, d);
  CHECK(tcfg.h11({0.5}) == Approx(0.25));          // exp(0)/4
  CHECK(tcfg.h11({2.5}) == Approx(std::exp(2.0) / 4.0));

  // pure time rescaling leaves sigma unchanged (the two offsets cancel)
  CHECK(tcfg.sigma({0.3, 0.4, 0.5}) == Approx(0.0).margin(1e-15));

  // an axis stretch shifts sigma by -(1/n) log(prod a)
  JetDiffeo st{1.0, 0.0, {2, 1, 1}};
  GeometryConfig scfg = transform_config(cfg, st);
  CHECK(scfg.sigma({0.3, 0.4, 0.5}) ==
        Approx(-std::log(2.0) / 3.0).margin(1e-15));
}

TEST_CASE("tensoriality of the definitional metric") {
  const DiffScheme scheme{1e-5, 1e-4, true, 30};
  auto cx = GeometryConfig::make(3, "x1", "1");
  JetPoint p{0.2, {0.3, -0.2, 0.5}, {1.0, 2.0, 0.5}};

  JetDiffeo id{1.0, 0.0, {1, 1, 1}};
  CHECK(tensoriality_residual(cx, id, p, scheme) == 0.0);

  JetDiffeo st{1.0, 0.0, {2, 1, 1}};
  CHECK(tensoriality_residual(cx, st, p, scheme) < 1e-4);

  auto flat = GeometryConfig::make(3, "0", "1");
  JetDiffeo time2{2.0, 0.0, {1, 1, 1}};
  CHECK(tensoriality_residual(flat, time2, p, scheme) < 1e-4);

  auto rich = GeometryConfig::make(3, "x1*x2", "exp(2*t)");
  JetDiffeo mix{2.0, -0.3, {1, 3, 2}};
  CHECK(tensoriality_residual(rich, mix, p, scheme) < 1e-4);
}
