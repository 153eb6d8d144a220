#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "polyscat/errors.hpp"
#include "polyscat/recon.hpp"

using namespace polyscat;
using namespace polyscat::recon;
using indicator::Classification;

TEST(MakeGrid, Layout) {
  const auto g = make_grid(2.0, 64, 32);
  ASSERT_EQ(g.centers.size(), 64u);
  ASSERT_EQ(g.radii.size(), 32u);
  for (const auto& c : g.centers) EXPECT_NEAR(c.norm(), 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(g.radii.front(), 2.0 / 32);
  EXPECT_LT(g.radii.back(), 4.0);
  for (std::size_t i = 1; i < g.radii.size(); ++i) EXPECT_GT(g.radii[i], g.radii[i - 1]);
  const auto line = make_grid(1.5, 1, 8);
  ASSERT_EQ(line.centers.size(), 1u);
  EXPECT_EQ(line.centers[0], Vec3(0, 0, 1.5));
  const auto again = make_grid(2.0, 64, 32);
  for (std::size_t j = 0; j < g.centers.size(); ++j) EXPECT_EQ(g.centers[j], again.centers[j]);
  EXPECT_THROW(make_grid(0.0, 8, 8), DomainError);
  EXPECT_THROW(make_grid(1.0, 3, 8), DomainError);
  EXPECT_THROW(make_grid(1.0, 8, 4), DomainError);
}

TEST(Voxelize, PointwiseAnd) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<mie::TestBall> balls;
  for (int b = 0; b < 5; ++b) balls.push_back({Vec3(u(rng), u(rng), u(rng)), 1.2 + 0.3 * u(rng)});
  const auto v = voxelize(balls, 1.0, 24);
  ASSERT_EQ(v.data.size(), 24u * 24u * 24u);
  for (int l = 0; l < 24; ++l) {
    for (int j = 0; j < 24; ++j) {
      for (int i = 0; i < 24; ++i) {
        bool in = true;
        for (const auto& b : balls) in = in && (v.center(i, j, l) - b.z).norm() <= b.h;
        ASSERT_EQ(v.at(i, j, l), in);
      }
    }
  }
  EXPECT_EQ(voxelize({}, 1.0, 4).count(), 64u);
}

TEST(Reconstruct, ZeroDataIsDegenerate) {
  const auto rule = harmonics::make_rule(60);
  const harmonics::TangentialField w{rule, std::vector<CVec3>(rule->size(), CVec3::Zero())};
  ReconOptions opts;
  opts.voxels = 16;
  const auto r = reconstruct(w, 2.0, make_grid(2.0, 6, 8), opts);
  EXPECT_TRUE(r.degenerate_data);
  for (const auto& p : r.pairs) EXPECT_EQ(p.cleaned, Classification::Bounded);
  EXPECT_EQ(r.accepted.size(), 48u);
}

class BallTarget : public ::testing::Test {
 protected:
  const double k = 2.0;
  const mie::TestBall target{Vec3(0.3, 0, 0), 0.5};
  harmonics::TangentialField data() const {
    return mie::far_field_pec_ball(target, {Vec3::UnitZ(), Vec3::UnitX()}, k, harmonics::make_rule(60));
  }
};

TEST_F(BallTarget, CriticalRadiusTracksTheCenter) {
  const auto grid = make_grid(2.0, 12, 64);
  ReconOptions opts;
  opts.voxels = 32;
  const auto r = reconstruct(data(), k, grid, opts);
  const double step = grid.h_step();
  ASSERT_TRUE(r.log.empty());
  for (const auto& p : r.pairs) {
    const double d = (grid.centers[p.center] - target.z).norm();
    // Exact data never accept a ball that misses the singular point.
    if (grid.radii[p.radius] < d - step) EXPECT_NE(p.cleaned, Classification::Bounded);
  }
  for (std::size_t j = 0; j < grid.centers.size(); ++j) {
    const double d = (grid.centers[j] - target.z).norm();
    ASSERT_FALSE(std::isnan(r.critical_radius[j]));
    EXPECT_GE(r.critical_radius[j], d - step);
    EXPECT_LE(r.critical_radius[j], d + 6 * step);
  }
  // Monotone after cleanup.
  for (std::size_t j = 0; j < grid.centers.size(); ++j) {
    bool seen = false;
    for (std::size_t i = 0; i < grid.radii.size(); ++i) {
      const bool b = r.pairs[j * grid.radii.size() + i].cleaned == Classification::Bounded;
      if (seen) EXPECT_TRUE(b);
      seen = seen || b;
    }
  }
  EXPECT_TRUE(r.occupancy.contains(target.z));
}

TEST_F(BallTarget, WorkerCountDoesNotChangeTheResult) {
  const auto grid = make_grid(2.0, 8, 16);
  ReconOptions a, b;
  a.voxels = b.voxels = 16;
  a.workers = 1;
  b.workers = 3;
  const auto w = data();
  const auto ra = reconstruct(w, k, grid, a);
  const auto rb = reconstruct(w, k, grid, b);
  ASSERT_EQ(ra.pairs.size(), rb.pairs.size());
  for (std::size_t i = 0; i < ra.pairs.size(); ++i) {
    EXPECT_EQ(ra.pairs[i].cleaned, rb.pairs[i].cleaned);
    EXPECT_EQ(ra.pairs[i].slope, rb.pairs[i].slope);
  }
  EXPECT_EQ(ra.occupancy.data, rb.occupancy.data);
}
