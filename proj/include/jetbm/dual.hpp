#pragma once

// Forward-mode automatic differentiation carried to second order: a Dual2
// holds a value, its gradient over m seed variables, and the full (symmetric)
// Hessian.  One evaluation of an expression on Dual2 operands yields exact
// first and second derivatives; no finite differences enter this path.
// m is the spatial dimension, so the vectors stay tiny.

#include <cmath>
#include <cstddef>

#include "core.hpp"

namespace jetbm {

class Dual2 {
 public:
  Dual2() = default;

  // Constant: zero gradient and Hessian over m variables.
  Dual2(double value, int m)
      : v_(value), m_(m), g_(m, 0.0), h_(std::size_t(m) * m, 0.0) {}

  // Seed variable occupying gradient slot `slot`.
  static Dual2 variable(double value, int m, int slot) {
    Dual2 d(value, m);
    d.g_[std::size_t(slot)] = 1.0;
    return d;
  }

  double value() const { return v_; }
  int vars() const { return m_; }
  double grad(int i) const { return g_[std::size_t(i)]; }
  double hess(int i, int j) const { return h_[std::size_t(i) * m_ + j]; }

  friend Dual2 operator+(const Dual2& a, const Dual2& b) {
    Dual2 r = a;
    r.v_ += b.v_;
    for (std::size_t i = 0; i < r.g_.size(); ++i) r.g_[i] += b.g_[i];
    for (std::size_t i = 0; i < r.h_.size(); ++i) r.h_[i] += b.h_[i];
    return r;
  }

  friend Dual2 operator-(const Dual2& a, const Dual2& b) {
    Dual2 r = a;
    r.v_ -= b.v_;
    for (std::size_t i = 0; i < r.g_.size(); ++i) r.g_[i] -= b.g_[i];
    for (std::size_t i = 0; i < r.h_.size(); ++i) r.h_[i] -= b.h_[i];
    return r;
  }

  friend Dual2 operator-(const Dual2& a) {
    Dual2 r = a;
    r.v_ = -r.v_;
    for (auto& x : r.g_) x = -x;
    for (auto& x : r.h_) x = -x;
    return r;
  }

  friend Dual2 operator*(const Dual2& a, const Dual2& b) {
    Dual2 r(0.0, a.m_);
    r.v_ = a.v_ * b.v_;
    const int m = a.m_;
    for (int i = 0; i < m; ++i)
      r.g_[std::size_t(i)] = a.g_[std::size_t(i)] * b.v_ + a.v_ * b.g_[std::size_t(i)];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        r.h_[std::size_t(i) * m + j] =
            a.hess(i, j) * b.v_ + a.grad(i) * b.grad(j) +
            a.grad(j) * b.grad(i) + a.v_ * b.hess(i, j);
    return r;
  }

  friend Dual2 operator/(const Dual2& a, const Dual2& b) {
    if (b.v_ == 0.0) throw DomainError("division by zero");
    return a * b.chain(1.0 / b.v_, -1.0 / (b.v_ * b.v_),
                       2.0 / (b.v_ * b.v_ * b.v_));
  }

  // f(u) with user-supplied f(u0), f'(u0), f''(u0); propagates
  // grad = f' u_i,  hess = f' u_ij + f'' u_i u_j.
  Dual2 chain(double f, double df, double ddf) const {
    Dual2 r(0.0, m_);
    r.v_ = f;
    const int m = m_;
    for (int i = 0; i < m; ++i) r.g_[std::size_t(i)] = df * grad(i);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        r.h_[std::size_t(i) * m + j] = df * hess(i, j) + ddf * grad(i) * grad(j);
    return r;
  }

 private:
  double v_ = 0.0;
  int m_ = 0;
  std::vector<double> g_;
  std::vector<double> h_;
};

inline Dual2 sin(const Dual2& u) {
  return u.chain(std::sin(u.value()), std::cos(u.value()), -std::sin(u.value()));
}
inline Dual2 cos(const Dual2& u) {
  return u.chain(std::cos(u.value()), -std::sin(u.value()), -std::cos(u.value()));
}
inline Dual2 exp(const Dual2& u) {
  double e = std::exp(u.value());
  return u.chain(e, e, e);
}
inline Dual2 log(const Dual2& u) {
  if (u.value() <= 0.0) throw DomainError("log of a non-positive argument");
  return u.chain(std::log(u.value()), 1.0 / u.value(),
                 -1.0 / (u.value() * u.value()));
}
inline Dual2 sqrt(const Dual2& u) {
  if (u.value() < 0.0) throw DomainError("sqrt of a negative argument");
  double s = std::sqrt(u.value());
  if (s == 0.0) throw DomainError("sqrt derivative singular at zero");
  return u.chain(s, 0.5 / s, -0.25 / (s * s * s));
}

// Power with a constant exponent (the only power the grammar admits).
inline Dual2 pow_const(const Dual2& u, double p) {
  if (p == 0.0) return Dual2(1.0, u.vars());
  double f = std::pow(u.value(), p);
  double df = p * std::pow(u.value(), p - 1.0);
  double ddf = p * (p - 1.0) * std::pow(u.value(), p - 2.0);
  if (p == 1.0) { df = 1.0; ddf = 0.0; }
  else if (p == 2.0) { ddf = 2.0; }
  if (!std::isfinite(f) || !std::isfinite(df) || !std::isfinite(ddf))
    throw DomainError("power outside domain of differentiability");
  return u.chain(f, df, ddf);
}

}  // namespace jetbm
