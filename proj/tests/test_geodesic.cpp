#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <jetbm/geodesic.hpp>

using namespace jetbm;
using Catch::Approx;

TEST_CASE("straight lines for the flat configuration") {
  GeodesicProblem prob{GeometryConfig::make(3, "0", "1"), 0.0, 1.0,
                       {0, 0, 0}, {1, 2, 4}, 100};
  Trajectory traj = integrate(prob);
  REQUIRE(traj.complete);
  REQUIRE(traj.samples.size() == 101);
  const auto& last = traj.samples.back();
  CHECK(last.t == Approx(1.0));
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(last.x[std::size_t(i)] - prob.y0[std::size_t(i)]) < 1e-10);
    // velocity components are exactly constant along the flat flow
    CHECK(last.y[std::size_t(i)] == prob.y0[std::size_t(i)]);
  }
  CHECK(el_residual(prob, traj) < 1e-10);
}

TEST_CASE("curvature only along the driven axis") {
  GeodesicProblem prob{GeometryConfig::make(3, "x1", "1"), 0.0, 1.0,
                       {0, 0, 0}, {1, 1, 1}, 200};
  Trajectory traj = integrate(prob);
  REQUIRE(traj.complete);
  const auto& last = traj.samples.back();
  // x2, x3 stay straight (their spray component vanishes identically)
  CHECK(last.x[1] == Approx(1.0).margin(1e-12));
  CHECK(last.x[2] == Approx(1.0).margin(1e-12));
  CHECK(last.y[1] == Approx(1.0).margin(1e-12));
  // x1 decelerates: dy1/dt = -3 y1^2 < 0
  CHECK(last.y[0] < 1.0);
  CHECK(last.x[0] < 1.0);
  // closed form of the 1d Riccati flow: y1(t) = 1/(1+3t)
  CHECK(last.y[0] == Approx(0.25).margin(1e-8));
}

TEST_CASE("temporal spray drives exponential velocity growth") {
  GeodesicProblem prob{GeometryConfig::make(3, "0", "exp(2*t)"), 0.0, 1.0,
                       {0, 0, 0}, {1, 1, 1}, 400};
  // dy/dt = -2H = kappa y with kappa = 1 for every t
  Trajectory traj = integrate(prob);
  REQUIRE(traj.complete);
  const auto& last = traj.samples.back();
  for (int i = 0; i < 3; ++i) {
    CHECK(last.y[std::size_t(i)] == Approx(std::exp(1.0)).margin(1e-8));
    CHECK(last.x[std::size_t(i)] == Approx(std::exp(1.0) - 1.0).margin(1e-8));
  }
}

TEST_CASE("Euler-Lagrange residual and step convergence") {
  auto cfg = GeometryConfig::make(3, "x1", "1");
  GeodesicProblem fine{cfg, 0.0, 1.0, {0, 0, 0}, {0.5, 1, 1}, 1000};
  Trajectory tf = integrate(fine);
  const double r1000 = el_residual(fine, tf);
  CHECK(r1000 < 1e-5);

  GeodesicProblem half{cfg, 0.0, 1.0, {0, 0, 0}, {0.5, 1, 1}, 500};
  const double r500 = el_residual(half, integrate(half));
  // second-order differencing dominates: halving the step divides by ~4
  CHECK(r500 / r1000 > 3.0);
  CHECK(r500 / r1000 < 5.0);
}

TEST_CASE("RK4 state convergence order") {
  auto cfg = GeometryConfig::make(3, "x1", "1");
  auto final_x1 = [&](int steps) {
    GeodesicProblem prob{cfg, 0.0, 1.0, {0, 0, 0}, {1, 1, 1}, steps};
    return integrate(prob).samples.back().x[0];
  };
  const double ref = final_x1(4000);
  const double e1 = std::abs(final_x1(50) - ref);
  const double e2 = std::abs(final_x1(100) - ref);
  CHECK(std::log2(e1 / e2) >= 3.5);
}

TEST_CASE("domain exit reports the last valid sample") {
  GeodesicProblem prob{GeometryConfig::make(2, "5*x1", "1"), 0.0, 1.0,
                       {0, 0}, {2, 2}, 4};
  Trajectory traj = integrate(prob);
  CHECK_FALSE(traj.complete);
  CHECK_FALSE(traj.failure.empty());
  REQUIRE(!traj.samples.empty());
  for (const auto& s : traj.samples) CHECK(product_G(s.y) > 0.0);
}

TEST_CASE("problem validation") {
  auto cfg = GeometryConfig::make(3, "0", "1");
  CHECK_THROWS_AS(integrate({cfg, 0.0, 1.0, {0, 0, 0}, {1, 1, 1}, 0}),
                  ConfigError);
  CHECK_THROWS_AS(integrate({cfg, 1.0, 0.5, {0, 0, 0}, {1, 1, 1}, 10}),
                  ConfigError);
  CHECK_THROWS_AS(integrate({cfg, 0.0, 1.0, {0, 0, 0}, {1, -1, 1}, 10}),
                  DomainError);

  GeodesicProblem two{cfg, 0.0, 1.0, {0, 0, 0}, {1, 1, 1}, 2};
  Trajectory t = integrate(two);
  CHECK_NOTHROW(el_residual(two, t));
  t.samples.resize(2);
  CHECK_THROWS_AS(el_residual(two, t), ConfigError);
}
