#include "pucci_game/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace pucci_game {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

const char* to_string(Region r) {
  switch (r) {
    case Region::Interior: return "interior";
    case Region::Strip: return "strip";
    case Region::FarExterior: return "far_exterior";
  }
  return "?";
}

Domain::Domain(Shape shape) : shape_(std::move(shape)) {
  std::visit(Overloaded{
                 [](const Ball& b) {
                   require(b.center.dim() >= 1, "ball needs a center");
                   require(b.radius > 0.0, "ball radius must be positive");
                 },
                 [](const Annulus& a) {
                   require(a.center.dim() >= 1, "annulus needs a center");
                   require(a.r_inner > 0.0, "annulus inner radius must be positive");
                   require(a.r_inner < a.r_outer, "annulus needs r_inner < r_outer");
                 },
                 [](const Box& b) {
                   require(b.lo.dim() >= 1 && b.lo.dim() == b.hi.dim(), "box corners must share a dimension");
                   for (int i = 0; i < b.lo.dim(); ++i) require(b.lo[i] < b.hi[i], "box needs lo < hi componentwise");
                 },
                 [](const Implicit& s) {
                   require(s.dim >= 1 && s.dim <= kMaxDim, "implicit domain dimension out of range");
                   require(static_cast<bool>(s.signed_distance), "implicit domain needs a signed distance");
                   require(s.bounding_radius > 0.0, "bounding radius must be positive");
                   require(s.exterior_sphere_radius > 0.0, "exterior sphere radius must be positive");
                 },
             },
             shape_);
}

int Domain::dim() const {
  return std::visit(Overloaded{
                        [](const Ball& b) { return b.center.dim(); },
                        [](const Annulus& a) { return a.center.dim(); },
                        [](const Box& b) { return b.lo.dim(); },
                        [](const Implicit& s) { return s.dim; },
                    },
                    shape_);
}

bool Domain::contains(const Point& x) const {
  return std::visit(Overloaded{
                        [&](const Ball& b) { return norm2(x - b.center) < b.radius * b.radius; },
                        [&](const Annulus& a) {
                          const double r2 = norm2(x - a.center);
                          return r2 > a.r_inner * a.r_inner && r2 < a.r_outer * a.r_outer;
                        },
                        [&](const Box& b) {
                          for (int i = 0; i < x.dim(); ++i)
                            if (!(x[i] > b.lo[i] && x[i] < b.hi[i])) return false;
                          return true;
                        },
                        [&](const Implicit& s) { return s.signed_distance(x) < 0.0; },
                    },
                    shape_);
}

double Domain::boundary_distance(const Point& x) const {
  return std::visit(Overloaded{
                        [&](const Ball& b) { return std::abs(norm(x - b.center) - b.radius); },
                        [&](const Annulus& a) {
                          const double r = norm(x - a.center);
                          return std::min(std::abs(r - a.r_inner), std::abs(r - a.r_outer));
                        },
                        [&](const Box& b) {
                          bool inside = true;
                          double out2 = 0.0;
                          double in_min = std::numeric_limits<double>::infinity();
                          for (int i = 0; i < x.dim(); ++i) {
                            const double below = b.lo[i] - x[i];
                            const double above = x[i] - b.hi[i];
                            const double gap = std::max({below, above, 0.0});
                            if (gap > 0.0) inside = false;
                            out2 += gap * gap;
                            in_min = std::min(in_min, std::min(-below, -above));
                          }
                          return inside ? std::max(in_min, 0.0) : std::sqrt(out2);
                        },
                        [&](const Implicit& s) { return std::abs(s.signed_distance(x)); },
                    },
                    shape_);
}

double Domain::bounding_radius() const {
  return std::visit(Overloaded{
                        [](const Ball& b) { return norm(b.center) + b.radius; },
                        [](const Annulus& a) { return norm(a.center) + a.r_outer; },
                        [](const Box& b) {
                          double s = 0.0;
                          for (int i = 0; i < b.lo.dim(); ++i) {
                            const double m = std::max(std::abs(b.lo[i]), std::abs(b.hi[i]));
                            s += m * m;
                          }
                          return std::sqrt(s);
                        },
                        [](const Implicit& s) { return s.bounding_radius; },
                    },
                    shape_);
}

double Domain::exterior_sphere_radius() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(Overloaded{
                        [](const Ball&) { return inf; },
                        [](const Annulus& a) { return a.r_inner; },
                        [](const Box&) { return inf; },
                        [](const Implicit& s) { return s.exterior_sphere_radius; },
                    },
                    shape_);
}

void Domain::bounding_box(Point& lo, Point& hi) const {
  std::visit(Overloaded{
                 [&](const Ball& b) {
                   lo = b.center - Point::filled(b.center.dim(), b.radius);
                   hi = b.center + Point::filled(b.center.dim(), b.radius);
                 },
                 [&](const Annulus& a) {
                   lo = a.center - Point::filled(a.center.dim(), a.r_outer);
                   hi = a.center + Point::filled(a.center.dim(), a.r_outer);
                 },
                 [&](const Box& b) {
                   lo = b.lo;
                   hi = b.hi;
                 },
                 [&](const Implicit& s) {
                   lo = Point::filled(s.dim, -s.bounding_radius);
                   hi = Point::filled(s.dim, s.bounding_radius);
                 },
             },
             shape_);
}

double strip_width(const PucciParams& params, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  return eps * std::sqrt(params.Lambda);
}

Region classify(const Domain& domain, const PucciParams& params, double eps, const Point& x) {
  if (domain.contains(x)) return Region::Interior;
  return domain.boundary_distance(x) <= strip_width(params, eps) ? Region::Strip : Region::FarExterior;
}

}  // namespace pucci_game
