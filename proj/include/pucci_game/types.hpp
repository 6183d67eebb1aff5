#pragma once

// Small value types shared by every module: fixed-capacity points and the
// library's exception hierarchy.

#include <array>
#include <cassert>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>

namespace pucci_game {

/// Largest spatial dimension supported by the fixed-capacity containers.
inline constexpr int kMaxDim = 4;

class Point {
 public:
  Point() = default;
  explicit Point(int dim) : dim_(dim) { check_dim(dim); }
  Point(std::initializer_list<double> values) : dim_(static_cast<int>(values.size())) {
    check_dim(dim_);
    int i = 0;
    for (double v : values) c_[i++] = v;
  }
  static Point filled(int dim, double value) {
    Point p(dim);
    for (int i = 0; i < dim; ++i) p.c_[i] = value;
    return p;
  }
  static Point unit(int dim, int axis) {
    Point p(dim);
    p.c_[axis] = 1.0;
    return p;
  }

  int dim() const { return dim_; }
  double& operator[](int i) { return c_[i]; }
  double operator[](int i) const { return c_[i]; }
  std::span<const double> coords() const { return {c_.data(), static_cast<size_t>(dim_)}; }

  Point& operator+=(const Point& o) {
    for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Point& operator-=(const Point& o) {
    for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Point& operator*=(double s) {
    for (int i = 0; i < dim_; ++i) c_[i] *= s;
    return *this;
  }

  bool operator==(const Point& o) const {
    if (dim_ != o.dim_) return false;
    for (int i = 0; i < dim_; ++i)
      if (c_[i] != o.c_[i]) return false;
    return true;
  }

 private:
  static void check_dim(int dim) {
    if (dim < 0 || dim > kMaxDim)
      throw std::invalid_argument("point dimension " + std::to_string(dim) + " outside [0, " +
                                  std::to_string(kMaxDim) + "]");
  }

  int dim_ = 0;
  std::array<double, kMaxDim> c_{};
};

inline Point operator+(Point a, const Point& b) { return a += b; }
inline Point operator-(Point a, const Point& b) { return a -= b; }
inline Point operator*(double s, Point a) { return a *= s; }
inline Point operator*(Point a, double s) { return a *= s; }

inline double dot(const Point& a, const Point& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}
inline double norm2(const Point& a) { return dot(a, a); }
inline double norm(const Point& a) { return std::sqrt(norm2(a)); }

inline bool is_finite(const Point& a) {
  for (int i = 0; i < a.dim(); ++i)
    if (!std::isfinite(a[i])) return false;
  return true;
}

using ScalarField = std::function<double(const Point&)>;

// ---------------------------------------------------------------------------
// Errors. Every failure the library reports derives from Error so callers can
// catch the whole family; the concrete type names the contract that broke.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonSymmetric : public Error {
 public:
  using Error::Error;
};
class UnsupportedDimension : public Error {
 public:
  using Error::Error;
};
class GridTooCoarse : public Error {
 public:
  using Error::Error;
};
class OutOfLattice : public Error {
 public:
  using Error::Error;
};
class NonPositiveRunningPayoff : public Error {
 public:
  using Error::Error;
};
class MaxStepsExceeded : public Error {
 public:
  using Error::Error;
};
class MismatchedStart : public Error {
 public:
  using Error::Error;
};
class OutOfRange : public Error {
 public:
  using Error::Error;
};
class DegenerateBranchMismatch : public Error {
 public:
  using Error::Error;
};
class MismatchedSweep : public Error {
 public:
  using Error::Error;
};
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pucci_game
