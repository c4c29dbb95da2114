#pragma once

// Seeded random jet points for the verification sweeps.  Distribution
// (documented so failures are reproducible):
//   y^i: log-uniform in [0.1, 10], then an even-sized random subset of
//        components is negated, keeping the product positive;
//   x^i: uniform in [-1, 1];
//   t:   uniform in [0, 1].

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>

#include "core.hpp"
#include "geometry.hpp"

namespace jetbm {

class PointSampler {
 public:
  PointSampler(int n, std::uint64_t seed, bool allow_negative_pairs = true)
      : n_(n), allow_negative_(allow_negative_pairs), rng_(seed) {}

  JetPoint next() {
    JetPoint p;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    p.t = unit(rng_);
    p.x.resize(std::size_t(n_));
    p.y.resize(std::size_t(n_));
    const double lo = std::log(0.1), hi = std::log(10.0);
    for (int i = 0; i < n_; ++i) {
      p.x[std::size_t(i)] = 2.0 * unit(rng_) - 1.0;
      p.y[std::size_t(i)] = std::exp(lo + (hi - lo) * unit(rng_));
    }
    if (allow_negative_) {
      std::uniform_int_distribution<int> half(0, n_ / 2);
      const int flips = 2 * half(rng_);
      std::vector<int> idx(std::size_t(n_), 0);
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng_);
      for (int k = 0; k < flips; ++k)
        p.y[std::size_t(idx[std::size_t(k)])] *= -1.0;
    }
    return p;
  }

 private:
  int n_;
  bool allow_negative_;
  std::mt19937_64 rng_;
};

}  // namespace jetbm
