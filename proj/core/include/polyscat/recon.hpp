#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "polyscat/harmonics.hpp"
#include "polyscat/indicator.hpp"
#include "polyscat/mie.hpp"

/// Imaging by intersecting accepted test balls: sample centers z_j on
/// |z| = R and radii h_i, classify every pair with the indicator, keep the
/// bounded ones and voxelize their intersection.
namespace polyscat::recon {

struct SamplingGrid {
  double R = 1.0;
  std::vector<Vec3> centers;
  /// Strictly increasing, inside (0, 2R).
  std::vector<double> radii;

  double h_step() const { return radii.size() > 1 ? radii[1] - radii[0] : 0.0; }
};

/// Fibonacci-lattice centers on |z| = R (N_z = 1 gives (0, 0, R)) and
/// h_i = h_min + i (2R - h_min) / N_h with h_min = R / N_h.
SamplingGrid make_grid(double R, int N_z, int N_h);

struct ReconOptions {
  mie::BallKind kind = mie::BallKind::PEC;
  double lambda = 1.0;  // test-ball impedance, impedance kind only
  indicator::TruncationPolicy policy{};
  /// Relative noise level of the data; the truncation and the indicator's
  /// noise floor use max(noise_delta, 1e-13).
  double noise_delta = 0.0;
  int voxels = 128;
  /// 0 = hardware concurrency.
  int workers = 0;
  /// Called after each finished center with (done, total), serialized.
  std::function<void(int, int)> progress;
};

struct PairResult {
  int center = 0;
  int radius = 0;
  indicator::Classification raw = indicator::Classification::Undetermined;
  indicator::Classification cleaned = indicator::Classification::Undetermined;
  int order = 0;
  double slope = 0.0;
  double last_partial = 0.0;
  bool skipped = false;  // spectrum guard or indicator error
};

/// res^3 booleans over [-R, R]^3; voxel (i, j, l) has center
/// -R + (i + 1/2) 2R/res in each axis, flat index (l res + j) res + i.
struct VoxelGrid {
  double R = 1.0;
  int res = 0;
  std::vector<std::uint8_t> data;

  double spacing() const { return 2.0 * R / res; }
  Vec3 center(int i, int j, int l) const;
  bool at(int i, int j, int l) const { return data[(std::size_t(l) * res + j) * res + i] != 0; }
  /// Occupancy at the voxel containing x (false outside the box).
  bool contains(const Vec3& x) const;
  std::size_t count() const;
};

struct ReconResult {
  SamplingGrid grid;
  /// Center-major: pairs[j * N_h + i].
  std::vector<PairResult> pairs;
  std::vector<mie::TestBall> accepted;
  std::vector<double> accepted_slope;
  std::vector<int> accepted_center;
  /// Smallest accepted h per center; NaN when none.
  std::vector<double> critical_radius;
  VoxelGrid occupancy;
  bool degenerate_data = false;
  std::vector<std::string> log;
};

/// Runs the full sweep. Per-pair failures are logged and the pair skipped.
/// After classification each center is cleaned monotonically: every h above
/// the first Bounded radius is Bounded.
ReconResult reconstruct(const harmonics::TangentialField& w, double k, const SamplingGrid& grid,
                        const ReconOptions& opts);

/// Multiplies every Cartesian component by 1 + delta xi with xi a complex
/// normal of unit variance, drawn from a generator seeded with `seed`.
harmonics::TangentialField add_noise(const harmonics::TangentialField& w, double delta, std::uint64_t seed);

/// Pointwise AND over accepted balls at voxel centers. With no accepted
/// ball the whole box is occupied.
VoxelGrid voxelize(const std::vector<mie::TestBall>& balls, double R, int res);

}  // namespace polyscat::recon
