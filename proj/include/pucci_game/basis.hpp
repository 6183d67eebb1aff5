#pragma once

// Orthonormal-basis controls and the discretised search over them.
//
// The player's sup over the orthogonal group is replaced by a finite
// candidate set: the axis basis, the eigenbasis of a Hessian estimate, a
// rotation grid and a golden-section refinement of the best grid angle(s).
// Rotations are parametrised by one angle in 2D and by the Tait-Bryan
// angles of Rz(a) Ry(b) Rx(c) in 3D; the basis vectors are the columns.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "pucci_game/pucci.hpp"
#include "pucci_game/types.hpp"

namespace pucci_game {

enum class SearchMode { AngleGrid, EigenbasisOnly, Hybrid };

const char* to_string(SearchMode m);

struct SearchConfig {
  SearchMode mode = SearchMode::Hybrid;
  double step = std::numbers::pi / 40.0;
  int refine_iters = 12;

  static SearchConfig angle_grid(double step) { return {SearchMode::AngleGrid, step, 0}; }
  static SearchConfig eigenbasis_only() { return {SearchMode::EigenbasisOnly, 0.0, 0}; }
  static SearchConfig hybrid(double step = std::numbers::pi / 40.0, int refine_iters = 12) {
    return {SearchMode::Hybrid, step, refine_iters};
  }

  /// Throws std::invalid_argument for a non-positive step in grid modes and
  /// UnsupportedDimension for grid modes above dimension 3.
  void validate(int dim) const;
};

/// The player's control at one step: orthonormal directions and, per
/// direction, mu_i^2 in {lambda, Lambda}. Squared scales are stored exactly.
struct BasisChoice {
  int dim = 0;
  std::array<Point, kMaxDim> directions{};
  std::array<double, kMaxDim> scale_sq{};

  double scale(int i) const { return std::sqrt(scale_sq[i]); }
  /// Gram matrix within tol of the identity and every scale_sq in {lambda, Lambda}.
  bool valid(const PucciParams& params, double tol = 1e-10) const;

  /// Axis basis with every direction at sqrt(lambda) (large = false) or
  /// sqrt(Lambda) (large = true).
  static BasisChoice axis(const PucciParams& params, bool large);
};

/// Rotation parameters of a candidate basis; unused trailing entries are 0.
using RotationAngles = std::array<double, 3>;

/// Orthonormal basis for the given angles (dims 1..3).
std::array<Point, kMaxDim> basis_from_angles(int dim, const RotationAngles& angles);

/// Angles reproducing the basis up to column signs (dims 1..3). The input
/// must be orthonormal; a reflection is turned into a rotation first.
RotationAngles angles_from_basis(int dim, std::array<Point, kMaxDim> basis);

/// Score of one direction: the value it contributes and whether the larger
/// option (sqrt(Lambda), or "move" in the degenerate game) was selected.
struct DirectionScore {
  double value;
  bool large;
};

/// A basis offered to the search in addition to the built-in candidates.
struct BasisCandidate {
  RotationAngles angles{};
  std::array<Point, kMaxDim> directions{};
};

/// Canonical candidate for an orthonormal basis: for dims <= 3 the angles are
/// folded into the search's parameter range and the directions rebuilt from
/// them; above that the directions are kept as given with zero angles.
BasisCandidate candidate_from_basis(int dim, const std::array<Point, kMaxDim>& basis);

struct SearchOutcome {
  double value = -std::numeric_limits<double>::infinity();
  RotationAngles angles{};
  std::array<Point, kMaxDim> directions{};
  std::array<bool, kMaxDim> large{};
  int candidates = 0;
};

/// Maximises sum_i score(v_i) over: the axis basis, `extra`, and (AngleGrid,
/// Hybrid) the rotation grid, followed (Hybrid) by golden-section refinement
/// of each angle around the incumbent. Ties keep the lexicographically
/// smaller rotation angles; refinement only replaces the incumbent on a strict
/// gain, and its angles may lie up to one grid step outside the grid range.
template <class Score>
SearchOutcome search_bases(int dim, const SearchConfig& cfg, std::span<const BasisCandidate> extra, Score&& score) {
  SearchOutcome best;
  bool refining = false;

  auto consider = [&](const std::array<Point, kMaxDim>& dirs, const RotationAngles& angles) {
    ++best.candidates;
    double total = 0.0;
    std::array<bool, kMaxDim> large{};
    for (int i = 0; i < dim; ++i) {
      const DirectionScore s = score(dirs[i]);
      total += s.value;
      large[i] = s.large;
    }
    if (total > best.value || (!refining && total == best.value && angles < best.angles)) {
      best.value = total;
      best.angles = angles;
      best.directions = dirs;
      best.large = large;
    }
    return total;
  };
  auto consider_angles = [&](const RotationAngles& angles) {
    return consider(basis_from_angles(dim, angles), angles);
  };

  const RotationAngles zero{};
  if (dim > 3) {
    std::array<Point, kMaxDim> axis{};
    for (int i = 0; i < dim; ++i) axis[i] = Point::unit(dim, i);
    consider(axis, zero);
  } else {
    consider_angles(zero);
  }
  if (dim == 1) return best;

  for (const BasisCandidate& c : extra) consider(c.directions, c.angles);

  if (cfg.mode == SearchMode::EigenbasisOnly) return best;

  const double step = cfg.step;
  if (dim == 2) {
    for (long k = 1;; ++k) {
      const double th = static_cast<double>(k) * step;
      if (th >= std::numbers::pi / 2) break;
      consider_angles({th, 0.0, 0.0});
    }
  } else {
    std::array<double, 3> a{};
    for (long i = 0;; ++i) {
      a[0] = static_cast<double>(i) * step;
      if (a[0] >= std::numbers::pi) break;
      for (long j = 0;; ++j) {
        a[1] = static_cast<double>(j) * step;
        if (a[1] >= std::numbers::pi) break;
        for (long k = 0;; ++k) {
          a[2] = static_cast<double>(k) * step;
          if (a[2] >= std::numbers::pi) break;
          if (i == 0 && j == 0 && k == 0) continue;
          consider_angles(a);
        }
      }
    }
  }

  if (cfg.mode == SearchMode::Hybrid && cfg.refine_iters > 0) {
    // Golden-section maximisation of each angle in turn around the incumbent.
    constexpr double inv_phi = 0.6180339887498949;
    refining = true;
    const int n_angles = dim == 2 ? 1 : 3;
    for (int which = 0; which < n_angles; ++which) {
      const RotationAngles centre = best.angles;
      auto eval = [&](double t) {
        RotationAngles a = centre;
        a[which] = t;
        return consider_angles(a);
      };
      double lo = centre[which] - step;
      double hi = centre[which] + step;
      double x1 = hi - inv_phi * (hi - lo);
      double x2 = lo + inv_phi * (hi - lo);
      double f1 = eval(x1);
      double f2 = eval(x2);
      for (int it = 0; it < cfg.refine_iters; ++it) {
        if (f1 < f2) {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + inv_phi * (hi - lo);
          f2 = eval(x2);
        } else {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - inv_phi * (hi - lo);
          f1 = eval(x1);
        }
      }
    }
  }
  return best;
}

}  // namespace pucci_game
