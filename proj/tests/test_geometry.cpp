#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <jetbm/geometry.hpp>
#include <jetbm/oracle.hpp>
#include <jetbm/sampling.hpp>

using namespace jetbm;
using Catch::Approx;

TEST_CASE("config validation") {
  CHECK_THROWS_AS(GeometryConfig::make(1, "0", "1"), ConfigError);
  CHECK_THROWS_AS(GeometryConfig::make(3, "0", "1", 0.0), ConfigError);
  CHECK_THROWS_AS(GeometryConfig::make(3, "x4", "1"), ParseError);  // x4 not declared at n=3
  CHECK_NOTHROW(GeometryConfig::make(4, "x4", "1"));
}

TEST_CASE("temporal data") {
  auto flat = GeometryConfig::make(3, "0", "1");
  TemporalData td = temporal_data(flat, 0.37);
  CHECK(td.h11 == 1.0);
  CHECK(td.h11_inv == 1.0);
  CHECK(td.kappa == 0.0);

  auto exp2 = GeometryConfig::make(3, "0", "exp(2*t)");
  TemporalData te = temporal_data(exp2, 0.0);
  CHECK(te.h11 == 1.0);
  CHECK(te.kappa == 1.0);
  // kappa = 1 for every t, not just 0
  CHECK(temporal_data(exp2, 0.8).kappa == Approx(1.0).margin(1e-14));

  auto lin = GeometryConfig::make(3, "0", "t");
  CHECK_THROWS_AS(temporal_data(lin, 0.0), DomainError);
  CHECK_THROWS_AS(temporal_data(lin, -2.0), DomainError);
  CHECK(temporal_data(lin, 4.0).kappa == Approx(0.125));
}

TEST_CASE("fibre product") {
  CHECK(product_G({1, 1, 1}) == 1.0);
  CHECK(product_G({1, 2, 4}) == 8.0);
  CHECK(product_G({2, -1, 1}) == -2.0);
  CHECK(product_G_derivative({1, 2, 4}, 1) == 4.0);  // G/y^2

  auto cfg = GeometryConfig::make(3, "0", "1");
  CHECK_THROWS_AS(validate_point(cfg, JetPoint{0, {0, 0, 0}, {2, -1, 1}}),
                  DomainError);
  CHECK_THROWS_AS(validate_point(cfg, JetPoint{0, {0, 0, 0}, {0, 1, 1}}),
                  DomainError);
  CHECK_THROWS_AS(validate_point(cfg, JetPoint{0, {0, 0}, {1, 1, 1}}),
                  DomainError);
  // two negative components keep the product positive and are admitted
  CHECK_NOTHROW(validate_point(cfg, JetPoint{0, {0, 0, 0}, {-2, -1, 1}}));
}

TEST_CASE("deformed metric function") {
  auto cfg = GeometryConfig::make(3, "0", "1");
  CHECK(fstar(cfg, {0, {0, 0, 0}, {1, 1, 1}}) == Approx(1.0));
  CHECK(fstar(cfg, {0, {0, 0, 0}, {1, 2, 4}}) == Approx(2.0));

  auto cfg2 = GeometryConfig::make(2, "x1", "1");
  CHECK(fstar(cfg2, {0, {0, 0}, {1, 1}}) == Approx(1.0));
  CHECK(fstar(cfg2, {0, {1, 0}, {1, 1}}) == Approx(std::exp(1.0)));
}

TEST_CASE("closed-form metric values") {
  auto c2 = GeometryConfig::make(2, "0", "1");
  SpatialMetric m2 = metric(c2, {0, {0, 0}, {1, 1}});
  CHECK(m2.g(0, 0) == Approx(0.0).margin(1e-15));
  CHECK(m2.g(0, 1) == Approx(0.5));
  CHECK(m2.g(1, 0) == Approx(0.5));
  CHECK(m2.g_inv(0, 0) == Approx(0.0).margin(1e-15));
  CHECK(m2.g_inv(0, 1) == Approx(2.0));

  auto c3 = GeometryConfig::make(3, "0", "1");
  SpatialMetric m3 = metric(c3, {0, {0, 0, 0}, {1, 1, 1}});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(m3.g(i, j) == Approx(i == j ? -1.0 / 9 : 2.0 / 9));
      CHECK(m3.g_inv(i, j) == Approx(i == j ? -1.0 : 2.0));
    }

  SpatialMetric m8 = metric(c3, {0, {0, 0, 0}, {1, 2, 4}});
  CHECK(m8.G_product == 8.0);
  CHECK(m8.g(0, 0) == Approx(-4.0 / 9));
  CHECK(m8.g(0, 1) == Approx(4.0 / 9));
  CHECK(m8.fstar == Approx(2.0));
}

TEST_CASE("metric invariants at random points") {
  const DiffScheme scheme{1e-5, 1e-4, true, 30};
  for (int n : {2, 3, 4, 5, 6}) {
    auto cfg = GeometryConfig::make(n, n >= 3 ? "x1*x2+x3" : "x1*x2", "exp(2*t)");
    PointSampler sampler(n, 7 + std::uint64_t(n));
    for (int s = 0; s < 20; ++s) {
      JetPoint p = sampler.next();
      SpatialMetric m = metric(cfg, p);
      TemporalData td = temporal_data(cfg, p.t);

      // symmetry
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          CHECK(m.g(i, j) == m.g(j, i));

      // definitional oracle
      CHECK(scaled_deviation(m.g, oracle_metric(cfg, p, scheme)) < 1e-5);

      // inverse
      double dev = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double prod = 0.0;
          for (int k = 0; k < n; ++k) prod += m.g(i, k) * m.g_inv(k, j);
          dev = std::max(dev, std::abs(prod - (i == j ? 1.0 : 0.0)));
        }
      CHECK(dev < 1e-10);

      // energy identity: g_ij y^i y^j = h11 F*^2 = e^{2 sigma} G^{2/n}
      double yy = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          yy += m.g(i, j) * p.y[std::size_t(i)] * p.y[std::size_t(j)];
      const double rhs = td.h11 * m.fstar * m.fstar;
      CHECK(std::abs(yy - rhs) / std::max(1.0, std::abs(rhs)) < 1e-10);

      // 0-homogeneity
      for (double lambda : {0.5, 2.0, 10.0}) {
        JetPoint q = p;
        for (auto& v : q.y) v *= lambda;
        CHECK(scaled_deviation(metric(cfg, q).g, m.g) < 1e-12);
      }
    }
  }
}

TEST_CASE("energy density") {
  auto cfg = GeometryConfig::make(3, "0", "1");
  CHECK(energy_density(cfg, {0, {0, 0, 0}, {1, 1, 1}}) == Approx(1.0));

  auto cfg4 = GeometryConfig::make(3, "0", "4");
  CHECK(energy_density(cfg4, {0, {0, 0, 0}, {1, 1, 1}}) == Approx(0.5));

  auto cfgx = GeometryConfig::make(2, "x1", "1");
  CHECK(energy_density(cfgx, {0, {1, 0}, {1, 1}}) == Approx(std::exp(2.0)));
}
