#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pucci_game/geometry.hpp"

using namespace pucci_game;

TEST(Domain, OpenSetMembership) {
  const Domain ball = Domain::ball(Point{0.0, 0.0}, 1.0);
  EXPECT_TRUE(contains(ball, Point{0.0, 0.0}));
  EXPECT_FALSE(contains(ball, Point{1.0, 0.0}));
  EXPECT_TRUE(contains(Domain::annulus(Point{0.0, 0.0}, 0.5, 2.0), Point{1.0, 0.0}));
}

TEST(Domain, RejectsInvalidShapes) {
  EXPECT_THROW(Domain::ball(Point{0.0, 0.0}, 0.0), std::invalid_argument);
  EXPECT_THROW(Domain::annulus(Point{0.0, 0.0}, 2.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Domain::annulus(Point{0.0, 0.0}, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Domain::box(Point{0.0, 1.0}, Point{1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(Domain(Implicit{2, {}, 1.0, 1.0}), std::invalid_argument);
}

TEST(StripWidth, EpsTimesSqrtLambda) {
  EXPECT_NEAR(strip_width(PucciParams(1.0, 4.0, 2), 0.1), 0.2, 1e-15);
  EXPECT_NEAR(strip_width(PucciParams(1.0, 1.0, 2), 0.05), 0.05, 1e-15);
  EXPECT_NEAR(strip_width(PucciParams(1.0, 2.0, 2), 0.01), 0.01 * std::sqrt(2.0), 1e-15);
  EXPECT_THROW(strip_width(PucciParams(1.0, 2.0, 2), 0.0), std::invalid_argument);
}

TEST(Classify, InteriorStripAndFarExterior) {
  const Domain ball = Domain::ball(Point{0.0, 0.0}, 1.0);
  const PucciParams p(1.0, 4.0, 2);  // eps sqrt(Lambda) = 0.2 at eps = 0.1
  EXPECT_EQ(classify(ball, p, 0.1, Point{1.1, 0.0}), Region::Strip);
  EXPECT_EQ(classify(ball, p, 0.1, Point{0.5, 0.0}), Region::Interior);
  EXPECT_EQ(classify(ball, p, 0.1, Point{2.0, 0.0}), Region::FarExterior);
  EXPECT_EQ(classify(ball, p, 0.1, Point{1.0, 0.0}), Region::Strip);
}

TEST(Classify, LegalStepsNeverReachFarExterior) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const PucciParams p(1.0, 3.0, 2);
  const double eps = 0.07;
  const Domain shapes[] = {Domain::ball(Point{0.2, -0.1}, 0.8), Domain::annulus(Point{0.0, 0.0}, 0.3, 1.0),
                           Domain::box(Point{-1.0, -0.5}, Point{0.5, 1.0})};
  for (const Domain& d : shapes) {
    int tested = 0;
    while (tested < 2000) {
      const Point x{u(rng), u(rng)};
      if (!d.contains(x)) continue;
      ++tested;
      const double th = std::acos(-1.0) * u(rng);
      const double mu = u(rng) > 0 ? std::sqrt(p.lambda) : std::sqrt(p.Lambda);
      const Point step = (eps * mu) * Point{std::cos(th), std::sin(th)};
      EXPECT_NE(classify(d, p, eps, x + step), Region::FarExterior);
      EXPECT_NE(classify(d, p, eps, x - step), Region::FarExterior);
    }
  }
}

TEST(Domain, BoundingRadiusEnclosesSamples) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const Domain shapes[] = {Domain::ball(Point{0.5, 1.0}, 0.7), Domain::annulus(Point{-1.0, 0.0}, 0.5, 1.5),
                           Domain::box(Point{-2.0, 0.5}, Point{0.5, 2.0})};
  for (const Domain& d : shapes) {
    const double R = d.bounding_radius();
    for (int i = 0; i < 5000; ++i) {
      const Point x{u(rng), u(rng)};
      if (d.contains(x)) EXPECT_LT(norm(x), R);
    }
  }
}

TEST(Domain, AnnulusMatchesRadialDefinition) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  const Point c{0.3, -0.2};
  const Domain a = Domain::annulus(c, 0.5, 2.0);
  for (int i = 0; i < 5000; ++i) {
    const Point x{u(rng), u(rng)};
    const double r = norm(x - c);
    if (std::abs(r - 0.5) > 1e-12 && std::abs(r - 2.0) > 1e-12) EXPECT_EQ(a.contains(x), r > 0.5 && r < 2.0);
  }
}

TEST(Domain, BoundaryDistanceAndExteriorSphere) {
  const Domain box = Domain::box(Point{0.0, 0.0}, Point{1.0, 1.0});
  EXPECT_NEAR(box.boundary_distance(Point{0.25, 0.5}), 0.25, 1e-15);
  EXPECT_NEAR(box.boundary_distance(Point{2.0, 2.0}), std::sqrt(2.0), 1e-15);
  EXPECT_TRUE(std::isinf(box.exterior_sphere_radius()));
  EXPECT_EQ(Domain::annulus(Point{0.0, 0.0}, 0.5, 2.0).exterior_sphere_radius(), 0.5);

  const Domain implicit(Implicit{2, [](const Point& x) { return norm(x) - 1.0; }, 1.0, 5.0});
  EXPECT_TRUE(implicit.contains(Point{0.5, 0.0}));
  EXPECT_NEAR(implicit.boundary_distance(Point{0.0, 1.5}), 0.5, 1e-15);
  EXPECT_EQ(implicit.exterior_sphere_radius(), 5.0);
}

TEST(Region, Names) {
  EXPECT_STREQ(to_string(Region::Interior), "interior");
  EXPECT_STREQ(to_string(Region::Strip), "strip");
  EXPECT_STREQ(to_string(Region::FarExterior), "far_exterior");
}
