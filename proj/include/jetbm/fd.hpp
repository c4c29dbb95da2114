#pragma once

// Central-difference machinery for the definitional oracle.  Step rule:
// h = eps * max(1, |coordinate|), with eps 1e-5 for first derivatives and
// 1e-4 for second.  If a stencil point leaves the domain (the field throws
// DomainError) the step is halved until the whole stencil evaluates; after
// max_shrink halvings the DomainError propagates.  One level of Richardson
// extrapolation is available per scheme.

#include <cmath>
#include <functional>

#include "core.hpp"

namespace jetbm {

struct DiffScheme {
  double eps_first = 1e-5;
  double eps_second = 1e-4;
  bool richardson = false;
  int max_shrink = 30;
};

namespace fd {

using Field1 = std::function<double(double)>;

inline double step(double eps, double coordinate) {
  return eps * std::max(1.0, std::abs(coordinate));
}

// (f(c+h) - f(c-h)) / 2h, shrinking h on domain violations.
inline double central1(const Field1& f, double c, double h,
                       const DiffScheme& s) {
  for (int attempt = 0;; ++attempt) {
    try {
      return (f(c + h) - f(c - h)) / (2.0 * h);
    } catch (const DomainError&) {
      if (attempt >= s.max_shrink)
        throw DomainError("stencil leaves the domain after maximal shrinking");
      h *= 0.5;
    }
  }
}

inline double first(const Field1& f, double c, const DiffScheme& s) {
  const double h = step(s.eps_first, c);
  if (!s.richardson) return central1(f, c, h, s);
  const double d1 = central1(f, c, h, s);
  const double d2 = central1(f, c, 0.5 * h, s);
  return (4.0 * d2 - d1) / 3.0;
}

inline double central2(const Field1& f, double c, double h,
                       const DiffScheme& s) {
  for (int attempt = 0;; ++attempt) {
    try {
      return (f(c + h) - 2.0 * f(c) + f(c - h)) / (h * h);
    } catch (const DomainError&) {
      if (attempt >= s.max_shrink)
        throw DomainError("stencil leaves the domain after maximal shrinking");
      h *= 0.5;
    }
  }
}

inline double second(const Field1& f, double c, const DiffScheme& s) {
  const double h = step(s.eps_second, c);
  if (!s.richardson) return central2(f, c, h, s);
  const double d1 = central2(f, c, h, s);
  const double d2 = central2(f, c, 0.5 * h, s);
  return (4.0 * d2 - d1) / 3.0;
}

using Field2 = std::function<double(double, double)>;

inline double cross(const Field2& f, double a, double b, double ha, double hb,
                    const DiffScheme& s) {
  for (int attempt = 0;; ++attempt) {
    try {
      return (f(a + ha, b + hb) - f(a + ha, b - hb) - f(a - ha, b + hb) +
              f(a - ha, b - hb)) /
             (4.0 * ha * hb);
    } catch (const DomainError&) {
      if (attempt >= s.max_shrink)
        throw DomainError("stencil leaves the domain after maximal shrinking");
      ha *= 0.5;
      hb *= 0.5;
    }
  }
}

// Mixed second derivative d^2 f / da db.
inline double mixed(const Field2& f, double a, double b, const DiffScheme& s) {
  const double ha = step(s.eps_second, a);
  const double hb = step(s.eps_second, b);
  if (!s.richardson) return cross(f, a, b, ha, hb, s);
  const double d1 = cross(f, a, b, ha, hb, s);
  const double d2 = cross(f, a, b, 0.5 * ha, 0.5 * hb, s);
  return (4.0 * d2 - d1) / 3.0;
}

inline std::vector<double>& flat(std::vector<double>& v) { return v; }
template <class T>
std::vector<double>& flat(T& t) { return t.data(); }

// First derivative of a tensor-valued field along one coordinate; a single
// field evaluation produces the whole tensor, so the stencil cost does not
// scale with the number of components.
template <class F>
auto first_field(const F& field, double c, const DiffScheme& s)
    -> decltype(field(c)) {
  auto quotient = [&](double h) {
    for (int attempt = 0;; ++attempt) {
      try {
        auto a = field(c + h);
        auto b = field(c - h);
        auto& fa = flat(a);
        auto& fb = flat(b);
        for (std::size_t k = 0; k < fa.size(); ++k)
          fa[k] = (fa[k] - fb[k]) / (2.0 * h);
        return a;
      } catch (const DomainError&) {
        if (attempt >= s.max_shrink)
          throw DomainError("stencil leaves the domain after maximal shrinking");
        h *= 0.5;
      }
    }
  };
  const double h = step(s.eps_first, c);
  auto d1 = quotient(h);
  if (!s.richardson) return d1;
  auto d2 = quotient(0.5 * h);
  auto& f1 = flat(d1);
  auto& f2 = flat(d2);
  for (std::size_t k = 0; k < f1.size(); ++k)
    f1[k] = (4.0 * f2[k] - f1[k]) / 3.0;
  return d1;
}

}  // namespace fd
}  // namespace jetbm
