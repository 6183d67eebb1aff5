#include "pucci_game/basis.hpp"

#include <algorithm>
#include <cmath>

namespace pucci_game {

const char* to_string(SearchMode m) {
  switch (m) {
    case SearchMode::AngleGrid: return "grid";
    case SearchMode::EigenbasisOnly: return "eigen";
    case SearchMode::Hybrid: return "hybrid";
  }
  return "?";
}

void SearchConfig::validate(int dim) const {
  if (mode == SearchMode::EigenbasisOnly) return;
  if (!(step > 0.0)) throw std::invalid_argument("search step must be positive");
  if (dim > 3) throw UnsupportedDimension("rotation-grid search supports dim <= 3; use eigenbasis mode");
}

bool BasisChoice::valid(const PucciParams& params, double tol) const {
  if (dim != params.dim) return false;
  for (int i = 0; i < dim; ++i) {
    if (scale_sq[i] != params.lambda && scale_sq[i] != params.Lambda) return false;
    for (int j = 0; j < dim; ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(dot(directions[i], directions[j]) - expected) > tol) return false;
    }
  }
  return true;
}

BasisChoice BasisChoice::axis(const PucciParams& params, bool large) {
  BasisChoice c;
  c.dim = params.dim;
  for (int i = 0; i < c.dim; ++i) {
    c.directions[i] = Point::unit(c.dim, i);
    c.scale_sq[i] = large ? params.Lambda : params.lambda;
  }
  return c;
}

std::array<Point, kMaxDim> basis_from_angles(int dim, const RotationAngles& angles) {
  std::array<Point, kMaxDim> b{};
  switch (dim) {
    case 1:
      b[0] = Point{1.0};
      break;
    case 2: {
      const double c = std::cos(angles[0]), s = std::sin(angles[0]);
      b[0] = Point{c, s};
      b[1] = Point{-s, c};
      break;
    }
    case 3: {
      const double ca = std::cos(angles[0]), sa = std::sin(angles[0]);
      const double cb = std::cos(angles[1]), sb = std::sin(angles[1]);
      const double cc = std::cos(angles[2]), sc = std::sin(angles[2]);
      b[0] = Point{ca * cb, sa * cb, -sb};
      b[1] = Point{ca * sb * sc - sa * cc, sa * sb * sc + ca * cc, cb * sc};
      b[2] = Point{ca * sb * cc + sa * sc, sa * sb * cc - ca * sc, cb * cc};
      break;
    }
    default:
      throw UnsupportedDimension("angle parametrisation covers dims 1..3");
  }
  return b;
}

namespace {

double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r = 0.0;
  return r;
}

}  // namespace

RotationAngles angles_from_basis(int dim, std::array<Point, kMaxDim> basis) {
  constexpr double pi = std::numbers::pi;
  switch (dim) {
    case 1:
      return {};
    case 2:
      // Rotating a 2D basis by pi/2 only permutes and flips its vectors.
      return {wrap(std::atan2(basis[0][1], basis[0][0]), pi / 2), 0.0, 0.0};
    case 3: {
      // Columns of R; make det(R) = +1.
      const Point& c0 = basis[0];
      const Point& c1 = basis[1];
      const Point& c2 = basis[2];
      const double det = c0[0] * (c1[1] * c2[2] - c1[2] * c2[1]) - c1[0] * (c0[1] * c2[2] - c0[2] * c2[1]) +
                         c2[0] * (c0[1] * c1[2] - c0[2] * c1[1]);
      if (det < 0.0) basis[2] *= -1.0;
      // R(i, j) = basis[j][i]
      auto r = [&](int i, int j) { return basis[j][i]; };
      const double sb = std::clamp(-r(2, 0), -1.0, 1.0);
      double b = std::asin(sb);
      double a, c;
      if (std::abs(std::cos(b)) > 1e-12) {
        a = std::atan2(r(1, 0), r(0, 0));
        c = std::atan2(r(2, 1), r(2, 2));
      } else {
        a = std::atan2(-r(0, 1), r(1, 1));
        c = 0.0;
      }
      // Column sign flips give (a + pi, b, c) ~ (a, -b, -c), (a, b, c) ~
      // (a, b + pi, -c) and c ~ c + pi; fold everything into [0, pi).
      a = wrap(a, 2 * pi);
      if (a >= pi) {
        a -= pi;
        b = -b;
        c = -c;
      }
      if (b < 0.0) {
        b += pi;
        c = -c;
      }
      return {a, wrap(b, pi), wrap(c, pi)};
    }
    default:
      throw UnsupportedDimension("angle parametrisation covers dims 1..3");
  }
}

BasisCandidate candidate_from_basis(int dim, const std::array<Point, kMaxDim>& basis) {
  BasisCandidate c;
  if (dim > 3) {
    c.directions = basis;
    return c;
  }
  c.angles = angles_from_basis(dim, basis);
  c.directions = basis_from_angles(dim, c.angles);
  return c;
}

}  // namespace pucci_game
