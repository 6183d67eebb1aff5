#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "pucci_game/basis.hpp"

using namespace pucci_game;

namespace {

bool same_up_to_signs(int dim, const std::array<Point, kMaxDim>& a, const std::array<Point, kMaxDim>& b,
                      double tol) {
  // Each vector of a must match some vector of b up to sign.
  for (int i = 0; i < dim; ++i) {
    bool found = false;
    for (int j = 0; j < dim && !found; ++j) found = std::abs(std::abs(dot(a[i], b[j])) - 1.0) < tol;
    if (!found) return false;
  }
  return true;
}

}  // namespace

TEST(Basis, AnglesGiveOrthonormalFrames) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, std::numbers::pi);
  for (int t = 0; t < 200; ++t) {
    const auto b = basis_from_angles(3, {u(rng), u(rng), u(rng)});
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) EXPECT_NEAR(dot(b[i], b[j]), i == j ? 1.0 : 0.0, 1e-14);
  }
}

TEST(Basis, AngleRoundTripCoversEveryFrameUpToSigns) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int t = 0; t < 500; ++t) {
    const auto frame = basis_from_angles(3, {u(rng), u(rng), u(rng)});
    const RotationAngles a = angles_from_basis(3, frame);
    for (double v : a) {
      EXPECT_GE(v, 0.0);
      EXPECT_LT(v, std::numbers::pi);
    }
    EXPECT_TRUE(same_up_to_signs(3, frame, basis_from_angles(3, a), 1e-9));
  }
  for (int t = 0; t < 100; ++t) {
    const auto frame = basis_from_angles(2, {u(rng), 0.0, 0.0});
    const RotationAngles a = angles_from_basis(2, frame);
    EXPECT_GE(a[0], 0.0);
    EXPECT_LT(a[0], std::numbers::pi / 2);
    EXPECT_TRUE(same_up_to_signs(2, frame, basis_from_angles(2, a), 1e-12));
  }
}

TEST(Basis, ReflectionsAreFoldedIntoRotations) {
  auto b = basis_from_angles(3, {0.4, 1.1, 2.0});
  b[1] *= -1.0;
  const auto c = candidate_from_basis(3, b);
  EXPECT_TRUE(same_up_to_signs(3, b, c.directions, 1e-9));
}

TEST(Basis, ChoiceValidity) {
  const PucciParams p(1.0, 2.0, 2);
  BasisChoice c = BasisChoice::axis(p, true);
  EXPECT_TRUE(c.valid(p));
  EXPECT_DOUBLE_EQ(c.scale(0), std::sqrt(2.0));
  c.scale_sq[1] = 1.5;
  EXPECT_FALSE(c.valid(p));
  c = BasisChoice::axis(p, false);
  c.directions[1] = Point{0.1, 1.0};
  EXPECT_FALSE(c.valid(p));
}

TEST(SearchConfig, Validation) {
  EXPECT_THROW(SearchConfig::angle_grid(0.0).validate(2), std::invalid_argument);
  EXPECT_THROW(SearchConfig::hybrid().validate(4), UnsupportedDimension);
  EXPECT_NO_THROW(SearchConfig::eigenbasis_only().validate(4));
  EXPECT_STREQ(to_string(SearchMode::Hybrid), "hybrid");
}

TEST(SearchBases, TiesKeepAxisAndSmallScale) {
  auto flat = [](const Point&) { return DirectionScore{1.0, false}; };
  const SearchOutcome o = search_bases(2, SearchConfig::hybrid(), {}, flat);
  EXPECT_EQ(o.angles[0], 0.0);
  EXPECT_NEAR(o.directions[0][0], 1.0, 0.0);
  EXPECT_FALSE(o.large[0]);
}

TEST(SearchBases, HybridLocatesOffGridMaximum) {
  // Score peaks for a first direction at angle 0.3 (between grid points).
  const double target = 0.3;
  const Point w{std::cos(target), std::sin(target)};
  auto score = [&](const Point& v) { return DirectionScore{std::pow(dot(v, w), 2), false}; };
  auto total = [&](const SearchOutcome& o) { return o.value; };
  const SearchOutcome grid = search_bases(2, SearchConfig::angle_grid(std::numbers::pi / 40), {}, score);
  const SearchOutcome hyb = search_bases(2, SearchConfig::hybrid(), {}, score);
  EXPECT_GE(total(hyb), total(grid));
  // Sum over an orthonormal pair is constant 1, so use a skewed score instead.
  auto skew = [&](const Point& v) { return DirectionScore{std::pow(dot(v, w), 4), false}; };
  const SearchOutcome best = search_bases(2, SearchConfig::hybrid(), {}, skew);
  EXPECT_NEAR(std::fmod(best.angles[0], std::numbers::pi / 2), target, 1e-4);
}

TEST(SearchBases, EigenbasisOnlyUsesAxisAndExtras) {
  const auto frame = basis_from_angles(2, {0.7, 0.0, 0.0});
  const BasisCandidate extra = candidate_from_basis(2, frame);
  int calls = 0;
  auto score = [&](const Point& v) {
    ++calls;
    return DirectionScore{std::pow(v[0], 4), false};
  };
  const SearchOutcome o = search_bases(2, SearchConfig::eigenbasis_only(), std::span(&extra, 1), score);
  EXPECT_EQ(o.candidates, 2);
  EXPECT_EQ(calls, 4);
  EXPECT_EQ(o.angles[0], 0.0);  // axis basis scores 1, the extra less
}
