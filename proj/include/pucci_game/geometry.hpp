#pragma once

// Bounded domains, the exterior stopping strip and point classification.

#include <limits>
#include <variant>

#include "pucci_game/pucci.hpp"
#include "pucci_game/types.hpp"

namespace pucci_game {

struct Ball {
  Point center;
  double radius;
};

struct Annulus {
  Point center;
  double r_inner;
  double r_outer;
};

struct Box {
  Point lo;
  Point hi;
};

/// Domain given by a signed distance (negative inside). Bounding and
/// exterior-sphere radii must be supplied; they are never inferred.
struct Implicit {
  int dim;
  ScalarField signed_distance;
  double bounding_radius;
  double exterior_sphere_radius;
};

enum class Region { Interior, Strip, FarExterior };

const char* to_string(Region r);

class Domain {
 public:
  using Shape = std::variant<Ball, Annulus, Box, Implicit>;

  /// Validates the shape invariants; throws std::invalid_argument.
  explicit Domain(Shape shape);

  static Domain ball(Point center, double radius) { return Domain(Ball{center, radius}); }
  static Domain annulus(Point center, double r_inner, double r_outer) {
    return Domain(Annulus{center, r_inner, r_outer});
  }
  static Domain box(Point lo, Point hi) { return Domain(Box{lo, hi}); }

  const Shape& shape() const { return shape_; }
  int dim() const;

  /// Open-set membership: boundary points are outside.
  bool contains(const Point& x) const;
  /// Euclidean distance from x to the boundary.
  double boundary_distance(const Point& x) const;
  /// R with the domain inside the origin-centred ball B_R(0).
  double bounding_radius() const;
  /// Radius of a uniform exterior tangent sphere (infinite for convex shapes).
  double exterior_sphere_radius() const;
  /// Axis-aligned box enclosing the domain.
  void bounding_box(Point& lo, Point& hi) const;

 private:
  Shape shape_;
};

inline bool contains(const Domain& domain, const Point& x) { return domain.contains(x); }

/// Width of the stopping strip, eps * sqrt(Lambda).
double strip_width(const PucciParams& params, double eps);

/// Interior iff x in the domain; Strip iff outside and within the strip
/// width of the boundary (boundary points included); FarExterior otherwise.
Region classify(const Domain& domain, const PucciParams& params, double eps, const Point& x);

}  // namespace pucci_game
