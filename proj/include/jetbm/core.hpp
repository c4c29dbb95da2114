#pragma once

// Shared scaffolding for the jetbm library: error types, dense little
// tensor containers (dimension is a runtime value, n is small), and the
// deviation helpers every check in the suite reports through.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetbm {

inline constexpr const char* version = "0.1.0";

// Evaluation left the domain of definition (G <= 0, h11 <= 0, log of a
// non-positive argument, division by zero, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Source text could not be parsed; carries the byte offset of the failure.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Invalid run configuration (bad dimension, missing fields, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

using Vec = std::vector<double>;

// Dense row-major n x n matrix.
class Mat {
 public:
  Mat() = default;
  explicit Mat(int n, double fill = 0.0) : n_(n), a_(std::size_t(n) * n, fill) {}

  int dim() const { return n_; }
  double& operator()(int i, int j) { return a_[std::size_t(i) * n_ + j]; }
  double operator()(int i, int j) const { return a_[std::size_t(i) * n_ + j]; }

  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

 private:
  int n_ = 0;
  std::vector<double> a_;
};

// Rank-3 tensor, layout [upper][lower1][lower2].  This layout is the one
// index convention used across the whole library (closed forms, oracle,
// checks); rank-4 extends it with a third lower slot.
class Ten3 {
 public:
  Ten3() = default;
  explicit Ten3(int n, double fill = 0.0)
      : n_(n), a_(std::size_t(n) * n * n, fill) {}

  int dim() const { return n_; }
  double& operator()(int l, int i, int j) {
    return a_[(std::size_t(l) * n_ + i) * n_ + j];
  }
  double operator()(int l, int i, int j) const {
    return a_[(std::size_t(l) * n_ + i) * n_ + j];
  }

  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

 private:
  int n_ = 0;
  std::vector<double> a_;
};

// Rank-4 tensor, layout [upper][lower1][lower2][lower3].
class Ten4 {
 public:
  Ten4() = default;
  explicit Ten4(int n, double fill = 0.0)
      : n_(n), a_(std::size_t(n) * n * n * n, fill) {}

  int dim() const { return n_; }
  double& operator()(int l, int i, int j, int k) {
    return a_[((std::size_t(l) * n_ + i) * n_ + j) * n_ + k];
  }
  double operator()(int l, int i, int j, int k) const {
    return a_[((std::size_t(l) * n_ + i) * n_ + j) * n_ + k];
  }

  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

 private:
  int n_ = 0;
  std::vector<double> a_;
};

inline double max_abs(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}
inline double max_abs(const Mat& t) { return max_abs(t.data()); }
inline double max_abs(const Ten3& t) { return max_abs(t.data()); }
inline double max_abs(const Ten4& t) { return max_abs(t.data()); }
inline double max_abs(double x) { return std::abs(x); }

namespace detail {
inline double max_abs_diff_raw(const Vec& a, const Vec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}
}  // namespace detail

// Largest componentwise difference (absolute).
inline double max_abs_diff(const Vec& a, const Vec& b) {
  return detail::max_abs_diff_raw(a, b);
}
inline double max_abs_diff(const Mat& a, const Mat& b) {
  return detail::max_abs_diff_raw(a.data(), b.data());
}
inline double max_abs_diff(const Ten3& a, const Ten3& b) {
  return detail::max_abs_diff_raw(a.data(), b.data());
}
inline double max_abs_diff(const Ten4& a, const Ten4& b) {
  return detail::max_abs_diff_raw(a.data(), b.data());
}
inline double max_abs_diff(double a, double b) { return std::abs(a - b); }

// Componentwise deviation scaled by max(1, |a|_inf, |b|_inf).  Used for all
// closed-form vs. oracle comparisons so tolerances read as relative with an
// absolute floor near zero.
template <class T>
double scaled_deviation(const T& a, const T& b) {
  double scale = std::max({1.0, max_abs(a), max_abs(b)});
  return max_abs_diff(a, b) / scale;
}

}  // namespace jetbm
