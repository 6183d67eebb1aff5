#pragma once

// Pucci maximal operator evaluated through eigenvalues, together with a
// brute-force maximisation over orthonormal bases that serves as an
// independent check of the eigenvalue formula.

#include <array>
#include <vector>

#include "pucci_game/types.hpp"

namespace pucci_game {

/// Ellipticity constants and spatial dimension. lambda == 0 selects the
/// degenerate operator; the full game requires lambda > 0.
struct PucciParams {
  double lambda = 1.0;
  double Lambda = 1.0;
  int dim = 2;

  PucciParams() = default;
  PucciParams(double lambda_, double Lambda_, int dim_);

  bool degenerate() const { return lambda == 0.0; }
  /// Smallest step scale a player can choose: sqrt(lambda), or sqrt(Lambda)
  /// for the degenerate game where that is the only scale.
  double min_scale() const;
  double max_scale() const;
};

/// Symmetric matrix of dimension <= kMaxDim. Construction symmetrises inputs
/// whose asymmetry is within 1e-12 (relative to the largest entry) and
/// rejects anything worse with NonSymmetric.
class SymMatrix {
 public:
  static constexpr double kSymmetryTol = 1e-12;

  SymMatrix() = default;
  explicit SymMatrix(int dim);
  /// Row-major entries, dim*dim of them.
  SymMatrix(int dim, std::span<const double> row_major);
  SymMatrix(int dim, std::initializer_list<double> row_major);

  static SymMatrix zero(int dim) { return SymMatrix(dim); }
  static SymMatrix identity(int dim);
  static SymMatrix diagonal(std::initializer_list<double> diag);
  static SymMatrix diagonal(std::span<const double> diag);

  int dim() const { return dim_; }
  double operator()(int i, int j) const { return a_[i * kMaxDim + j]; }
  /// Sets both (i,j) and (j,i).
  void set(int i, int j, double v) {
    a_[i * kMaxDim + j] = v;
    a_[j * kMaxDim + i] = v;
  }

  double frobenius_norm() const;
  double trace() const;
  /// <A v, v>
  double quadratic_form(const Point& v) const;
  Point apply(const Point& v) const;
  SymMatrix scaled(double s) const;
  SymMatrix plus(const SymMatrix& o) const;
  /// Q^T A Q for a square matrix Q given by its columns.
  SymMatrix congruence(std::span<const Point> q_columns) const;

 private:
  void init(int dim, std::span<const double> row_major);

  int dim_ = 0;
  std::array<double, kMaxDim * kMaxDim> a_{};
};

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  std::vector<Point> vectors;  // vectors[i] pairs with values[i], orthonormal
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm is below
/// 1e-14 * ||A||_F.
EigenDecomposition eigen_sym(const SymMatrix& a);
std::vector<double> eigenvalues_sym(const SymMatrix& a);

/// Lambda * (sum of positive eigenvalues) + lambda * (sum of negative ones).
double pucci_plus(const PucciParams& params, const SymMatrix& a);
/// Same operator evaluated on an explicit eigenvalue list.
double pucci_plus_from_eigenvalues(const PucciParams& params, std::span<const double> eigenvalues);
/// Lambda * (sum of positive eigenvalues).
double pucci_plus_degenerate(double Lambda, const SymMatrix& a);

/// max over a rotation grid of sum_i mu_i^2 <A v_i, v_i> with the best mu_i
/// picked per direction. dim 2 sweeps one angle over [0, pi/2); dim 3 sweeps
/// three Givens angles over [0, pi)^3. Other dims throw UnsupportedDimension.
double sup_over_bases_bruteforce(const PucciParams& params, const SymMatrix& a, double angle_step);

}  // namespace pucci_game
