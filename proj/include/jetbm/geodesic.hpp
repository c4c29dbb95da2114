#pragma once

// Euler-Lagrange flow of the energy functional:
//   d2x/dt2 + 2H(t,x,y) + 2G(t,x,y) = 0,  y = dx/dt,
// integrated as the first-order system with classical fixed-step RK4.
// Leaving the fibre domain (product of y components <= 0) ends the run at
// the last valid sample.

#include <cmath>
#include <string>
#include <vector>

#include "connection.hpp"
#include "core.hpp"
#include "geometry.hpp"

namespace jetbm {

struct GeodesicProblem {
  GeometryConfig cfg;
  double t0 = 0.0;
  double t1 = 1.0;
  Vec x0;
  Vec y0;
  int steps = 100;
};

struct TrajectorySample {
  double t = 0.0;
  Vec x;
  Vec y;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double step = 0.0;
  bool complete = true;
  std::string failure;  // set when the flow left the domain
};

namespace detail {

// Right-hand side of the first-order system.  Interior RK stages may sit
// outside the fibre domain; the spray components are polynomial in y, so
// they are evaluated directly without the domain guard.  The guard applies
// to the accepted samples.
inline void geodesic_rhs(const GeometryConfig& cfg, double t, const Vec& x,
                         const Vec& y, Vec& dx, Vec& dy) {
  TemporalData td = temporal_data(cfg, t);
  SigmaData sd = sigma_data(cfg, x);
  const int n = cfg.n;
  dx = y;
  dy.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double H = -0.5 * td.kappa * y[i];
    const double G = 0.5 * n * sd.grad[i] * y[i] * y[i];
    dy[i] = -2.0 * H - 2.0 * G;
  }
}

}  // namespace detail

inline Trajectory integrate(const GeodesicProblem& prob) {
  if (prob.steps <= 0) throw ConfigError("steps must be positive");
  if (!(prob.t1 > prob.t0)) throw ConfigError("t1 must exceed t0");
  validate_point(prob.cfg, JetPoint{prob.t0, prob.x0, prob.y0});

  const double h = (prob.t1 - prob.t0) / prob.steps;
  Trajectory traj;
  traj.step = h;
  traj.samples.push_back({prob.t0, prob.x0, prob.y0});

  Vec x = prob.x0, y = prob.y0;
  Vec k1x, k1y, k2x, k2y, k3x, k3y, k4x, k4y, xs, ys;
  const std::size_t n = x.size();
  for (int s = 0; s < prob.steps; ++s) {
    const double t = prob.t0 + s * h;
    detail::geodesic_rhs(prob.cfg, t, x, y, k1x, k1y);
    xs = x; ys = y;
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = x[i] + 0.5 * h * k1x[i];
      ys[i] = y[i] + 0.5 * h * k1y[i];
    }
    detail::geodesic_rhs(prob.cfg, t + 0.5 * h, xs, ys, k2x, k2y);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = x[i] + 0.5 * h * k2x[i];
      ys[i] = y[i] + 0.5 * h * k2y[i];
    }
    detail::geodesic_rhs(prob.cfg, t + 0.5 * h, xs, ys, k3x, k3y);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = x[i] + h * k3x[i];
      ys[i] = y[i] + h * k3y[i];
    }
    detail::geodesic_rhs(prob.cfg, t + h, xs, ys, k4x, k4y);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += h / 6.0 * (k1x[i] + 2.0 * (k2x[i] + k3x[i]) + k4x[i]);
      y[i] += h / 6.0 * (k1y[i] + 2.0 * (k2y[i] + k3y[i]) + k4y[i]);
    }
    if (!(product_G(y) > 0.0)) {
      traj.complete = false;
      traj.failure = "fibre product reached zero within step " +
                     std::to_string(s + 1) + "; last valid sample kept";
      return traj;
    }
    traj.samples.push_back({prob.t0 + (s + 1) * h, x, y});
  }
  return traj;
}

// Max over interior samples of |x'' + 2H + 2G| with x'' from second-order
// central differences of the sampled positions.
inline double el_residual(const GeodesicProblem& prob, const Trajectory& traj) {
  if (traj.samples.size() < 3)
    throw ConfigError("residual needs at least three samples");
  const double h = traj.step;
  double worst = 0.0;
  Vec dx, dy;
  for (std::size_t s = 1; s + 1 < traj.samples.size(); ++s) {
    const auto& prev = traj.samples[s - 1];
    const auto& cur = traj.samples[s];
    const auto& next = traj.samples[s + 1];
    JetPoint p{cur.t, cur.x, cur.y};
    auto [H, G] = spray(prob.cfg, p);
    for (std::size_t i = 0; i < cur.x.size(); ++i) {
      const double xdd = (next.x[i] - 2.0 * cur.x[i] + prev.x[i]) / (h * h);
      worst = std::max(worst, std::abs(xdd + 2.0 * H[i] + 2.0 * G[i]));
    }
  }
  return worst;
}

}  // namespace jetbm
