#include "pucci_game/pucci.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace pucci_game {

PucciParams::PucciParams(double lambda_, double Lambda_, int dim_)
    : lambda(lambda_), Lambda(Lambda_), dim(dim_) {
  if (!(Lambda > 0.0) || !(lambda >= 0.0) || lambda > Lambda)
    throw std::invalid_argument("ellipticity constants must satisfy 0 <= lambda <= Lambda, Lambda > 0");
  if (dim < 1 || dim > kMaxDim)
    throw UnsupportedDimension("dimension " + std::to_string(dim) + " not supported");
}

double PucciParams::min_scale() const { return std::sqrt(degenerate() ? Lambda : lambda); }
double PucciParams::max_scale() const { return std::sqrt(Lambda); }

// ---------------------------------------------------------------------------

SymMatrix::SymMatrix(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim)
    throw UnsupportedDimension("matrix dimension " + std::to_string(dim) + " not supported");
}

SymMatrix::SymMatrix(int dim, std::span<const double> row_major) : SymMatrix(dim) {
  init(dim, row_major);
}

SymMatrix::SymMatrix(int dim, std::initializer_list<double> row_major) : SymMatrix(dim) {
  init(dim, std::span<const double>(row_major.begin(), row_major.size()));
}

void SymMatrix::init(int dim, std::span<const double> row_major) {
  if (row_major.size() != static_cast<size_t>(dim * dim))
    throw std::invalid_argument("expected " + std::to_string(dim * dim) + " matrix entries");
  double scale = 0.0;
  for (double v : row_major) scale = std::max(scale, std::abs(v));
  const double tol = kSymmetryTol * std::max(1.0, scale);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      const double aij = row_major[i * dim + j];
      const double aji = row_major[j * dim + i];
      if (std::abs(aij - aji) > tol)
        throw NonSymmetric("entries (" + std::to_string(i) + "," + std::to_string(j) +
                           ") differ by " + std::to_string(std::abs(aij - aji)));
      set(i, j, 0.5 * (aij + aji));
    }
  }
}

SymMatrix SymMatrix::identity(int dim) {
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
  return m;
}

SymMatrix SymMatrix::diagonal(std::initializer_list<double> diag) {
  return diagonal(std::span<const double>(diag.begin(), diag.size()));
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  SymMatrix m(static_cast<int>(diag.size()));
  for (size_t i = 0; i < diag.size(); ++i) m.set(static_cast<int>(i), static_cast<int>(i), diag[i]);
  return m;
}

double SymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) s += (*this)(i, j) * (*this)(i, j);
  return std::sqrt(s);
}

double SymMatrix::trace() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += (*this)(i, i);
  return s;
}

double SymMatrix::quadratic_form(const Point& v) const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) {
    double row = 0.0;
    for (int j = 0; j < dim_; ++j) row += (*this)(i, j) * v[j];
    s += v[i] * row;
  }
  return s;
}

Point SymMatrix::apply(const Point& v) const {
  Point out(dim_);
  for (int i = 0; i < dim_; ++i) {
    double row = 0.0;
    for (int j = 0; j < dim_; ++j) row += (*this)(i, j) * v[j];
    out[i] = row;
  }
  return out;
}

SymMatrix SymMatrix::scaled(double s) const {
  SymMatrix m(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) m.set(i, j, s * (*this)(i, j));
  return m;
}

SymMatrix SymMatrix::plus(const SymMatrix& o) const {
  if (o.dim_ != dim_) throw std::invalid_argument("matrix dimension mismatch");
  SymMatrix m(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) m.set(i, j, (*this)(i, j) + o(i, j));
  return m;
}

SymMatrix SymMatrix::congruence(std::span<const Point> q) const {
  if (static_cast<int>(q.size()) != dim_) throw std::invalid_argument("congruence needs dim columns");
  SymMatrix m(dim_);
  for (int i = 0; i < dim_; ++i) {
    const Point aq = apply(q[i]);
    for (int j = 0; j <= i; ++j) m.set(j, i, dot(q[j], aq));
  }
  return m;
}

// ---------------------------------------------------------------------------

EigenDecomposition eigen_sym(const SymMatrix& input) {
  const int n = input.dim();
  std::array<std::array<double, kMaxDim>, kMaxDim> a{};
  std::array<std::array<double, kMaxDim>, kMaxDim> v{};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = input(i, j);
    v[i][i] = 1.0;
  }

  const double target = 1e-14 * input.frobenius_norm();
  auto off_norm = [&] {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) s += a[i][j] * a[i][j];
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && off_norm() > target; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[p][q];
        if (apq == 0.0) continue;
        // Rotation angle zeroing a[p][q] (Golub & Van Loan, sym.schur2).
        const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a[x][x] < a[y][y]; });

  EigenDecomposition out;
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (int idx : order) {
    out.values.push_back(a[idx][idx]);
    Point col(n);
    for (int k = 0; k < n; ++k) col[k] = v[k][idx];
    out.vectors.push_back(col);
  }
  return out;
}

std::vector<double> eigenvalues_sym(const SymMatrix& a) { return eigen_sym(a).values; }

double pucci_plus_from_eigenvalues(const PucciParams& params, std::span<const double> eigenvalues) {
  double pos = 0.0;
  double neg = 0.0;
  for (double e : eigenvalues) {
    if (e > 0.0)
      pos += e;
    else if (e < 0.0)
      neg += e;
  }
  return params.Lambda * pos + params.lambda * neg;
}

double pucci_plus(const PucciParams& params, const SymMatrix& a) {
  if (params.dim != a.dim())
    throw std::invalid_argument("operator dimension " + std::to_string(params.dim) +
                                " does not match matrix dimension " + std::to_string(a.dim()));
  const auto ev = eigenvalues_sym(a);
  return pucci_plus_from_eigenvalues(params, ev);
}

double pucci_plus_degenerate(double Lambda, const SymMatrix& a) {
  if (!(Lambda > 0.0)) throw std::invalid_argument("Lambda must be positive");
  double pos = 0.0;
  for (double e : eigenvalues_sym(a))
    if (e > 0.0) pos += e;
  return Lambda * pos;
}

// ---------------------------------------------------------------------------

double sup_over_bases_bruteforce(const PucciParams& params, const SymMatrix& a, double angle_step) {
  if (!(angle_step > 0.0)) throw std::invalid_argument("angle_step must be positive");
  if (params.dim != a.dim()) throw std::invalid_argument("operator/matrix dimension mismatch");
  const double lo = params.lambda;
  const double hi = params.Lambda;
  auto weigh = [lo, hi](double q) { return q >= 0.0 ? hi * q : lo * q; };

  if (a.dim() == 2) {
    const double a11 = a(0, 0), a12 = a(0, 1), a22 = a(1, 1);
    double best = -std::numeric_limits<double>::infinity();
    for (long k = 0;; ++k) {
      const double th = static_cast<double>(k) * angle_step;
      if (th >= std::numbers::pi / 2) break;
      const double c = std::cos(th), s = std::sin(th);
      const double q1 = c * c * a11 + 2 * c * s * a12 + s * s * a22;
      const double q2 = s * s * a11 - 2 * c * s * a12 + c * c * a22;
      best = std::max(best, weigh(q1) + weigh(q2));
    }
    return best;
  }

  if (a.dim() == 3) {
    // Basis = columns of Rz(x) Ry(y) Rx(z). For fixed (x, y) reduce A to
    // B = (Rz Ry)^T A (Rz Ry); the x-rotation then only mixes B's last two axes.
    std::vector<double> cs, sn;
    for (long k = 0;; ++k) {
      const double th = static_cast<double>(k) * angle_step;
      if (th >= std::numbers::pi) break;
      cs.push_back(std::cos(th));
      sn.push_back(std::sin(th));
    }
    const size_t m = cs.size();
    double best = -std::numeric_limits<double>::infinity();
    for (size_t ix = 0; ix < m; ++ix) {
      for (size_t iy = 0; iy < m; ++iy) {
        const double cx = cs[ix], sx = sn[ix], cy = cs[iy], sy = sn[iy];
        // Columns of Rz(x) Ry(y).
        const Point c0{cx * cy, sx * cy, -sy};
        const Point c1{-sx, cx, 0.0};
        const Point c2{cx * sy, sx * sy, cy};
        const double b00 = a.quadratic_form(c0);
        const double b11 = a.quadratic_form(c1);
        const double b22 = a.quadratic_form(c2);
        const double b12 = dot(c1, a.apply(c2));
        const double w0 = weigh(b00);
        for (size_t iz = 0; iz < m; ++iz) {
          const double c = cs[iz], s = sn[iz];
          const double q1 = c * c * b11 + 2 * c * s * b12 + s * s * b22;
          const double q2 = s * s * b11 - 2 * c * s * b12 + c * c * b22;
          best = std::max(best, w0 + weigh(q1) + weigh(q2));
        }
      }
    }
    return best;
  }

  throw UnsupportedDimension("brute-force basis search supports dim 2 and 3 only");
}

}  // namespace pucci_game
