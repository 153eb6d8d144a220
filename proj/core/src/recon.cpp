#include "polyscat/recon.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "polyscat/errors.hpp"

namespace polyscat::recon {
namespace {

using indicator::Classification;

constexpr double kMinNoise = 1e-13;

mie::BallSpectrum spectrum_for(double k, double h, int order, const ReconOptions& opts) {
  if (opts.kind == mie::BallKind::PEC) return mie::pec_ball_spectrum(k, h, order);
  return mie::impedance_ball_spectrum(k, h, opts.lambda, order);
}

double field_norm(const harmonics::TangentialField& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.values.size(); ++i) s += w.rule->weight(i) * w.values[i].squaredNorm();
  return std::sqrt(s);
}

// Classifies every radius at one center. Errors are recorded per pair.
void sweep_center(const harmonics::TangentialField& w, double k, double data_norm, const SamplingGrid& grid,
                  const ReconOptions& opts, int j, PairResult* out, std::vector<std::string>& log) {
  const int n_h = static_cast<int>(grid.radii.size());
  const double delta = std::max(opts.noise_delta, kMinNoise);
  harmonics::TangentialCoeffs coeffs;
  try {
    coeffs = harmonics::analyze(w, grid.centers[j], k, opts.policy.N_max);
  } catch (const Error& e) {
    for (int i = 0; i < n_h; ++i) out[i] = PairResult{j, i, Classification::Undetermined,
                                                      Classification::Undetermined, 0, 0.0, 0.0, true};
    log.push_back("center " + std::to_string(j) + ": " + e.what());
    return;
  }
  for (int i = 0; i < n_h; ++i) {
    PairResult& r = out[i];
    r = PairResult{};
    r.center = j;
    r.radius = i;
    const double h = grid.radii[i];
    try {
      const auto spectrum = spectrum_for(k, h, opts.policy.N_max, opts);
      indicator::TruncationPolicy local = opts.policy;
      local.N_max = indicator::select_truncation(k, h, delta, spectrum, opts.policy);
      local.noise_floor = std::max(opts.policy.noise_floor, delta * data_norm);
      if (local.N_max < 3) {
        // Too few terms above the noise level to see growth.
        r.order = local.N_max;
        continue;
      }
      local.window = std::min(local.window, local.N_max - 1);
      const auto curve = indicator::indicator_from_coeffs(coeffs, mie::TestBall{grid.centers[j], h}, spectrum, local);
      r.raw = curve.classification;
      r.order = curve.order();
      r.slope = curve.slope;
      r.last_partial = curve.partials.back();
    } catch (const Error& e) {
      r.skipped = true;
      std::ostringstream msg;
      msg << "center " << j << ", h = " << h << ": " << e.what();
      log.push_back(msg.str());
    }
  }
}

// Theorem-level monotonicity: bounded at h implies bounded at every larger
// radius, and divergent at h implies divergent at every smaller radius.
void cleanup(PairResult* row, int n_h) {
  int first_bounded = n_h;
  for (int i = 0; i < n_h; ++i) {
    row[i].cleaned = row[i].skipped ? Classification::Undetermined : row[i].raw;
    if (first_bounded == n_h && !row[i].skipped && row[i].raw == Classification::Bounded) first_bounded = i;
  }
  for (int i = first_bounded; i < n_h; ++i) row[i].cleaned = Classification::Bounded;
  bool divergent_above = false;
  for (int i = first_bounded - 1; i >= 0; --i) {
    if (row[i].cleaned == Classification::Divergent) divergent_above = true;
    else if (divergent_above && row[i].cleaned == Classification::Undetermined) row[i].cleaned = Classification::Divergent;
  }
}

}  // namespace

SamplingGrid make_grid(double R, int N_z, int N_h) {
  if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("R must be positive");
  if (N_z != 1 && N_z < 6) throw DomainError("N_z must be 1 or >= 6");
  if (N_h < 8) throw DomainError("N_h must be >= 8");
  SamplingGrid g;
  g.R = R;
  if (N_z == 1) {
    g.centers.emplace_back(0.0, 0.0, R);
  } else {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int j = 0; j < N_z; ++j) {
      const double zc = 1.0 - (2.0 * j + 1.0) / N_z;
      const double rho = std::sqrt(std::max(0.0, 1.0 - zc * zc));
      const double phi = golden * j;
      Vec3 c(rho * std::cos(phi), rho * std::sin(phi), zc);
      g.centers.push_back(R * c.normalized());
    }
  }
  const double h_min = R / N_h;
  const double step = (2.0 * R - h_min) / N_h;
  for (int i = 0; i < N_h; ++i) g.radii.push_back(h_min + i * step);
  return g;
}

Vec3 VoxelGrid::center(int i, int j, int l) const {
  const double s = spacing();
  return {-R + (i + 0.5) * s, -R + (j + 0.5) * s, -R + (l + 0.5) * s};
}

bool VoxelGrid::contains(const Vec3& x) const {
  const double s = spacing();
  int idx[3];
  for (int a = 0; a < 3; ++a) {
    const double t = std::floor((x[a] + R) / s);
    if (t < 0 || t >= res) return false;
    idx[a] = static_cast<int>(t);
  }
  return at(idx[0], idx[1], idx[2]);
}

std::size_t VoxelGrid::count() const { return static_cast<std::size_t>(std::count(data.begin(), data.end(), 1)); }

VoxelGrid voxelize(const std::vector<mie::TestBall>& balls, double R, int res) {
  if (!(R > 0.0) || res < 1) throw DomainError("voxel grid needs R > 0 and res >= 1");
  VoxelGrid v;
  v.R = R;
  v.res = res;
  v.data.assign(std::size_t(res) * res * res, 1);
  for (int l = 0; l < res; ++l) {
    for (int j = 0; j < res; ++j) {
      for (int i = 0; i < res; ++i) {
        const Vec3 x = v.center(i, j, l);
        for (const auto& b : balls) {
          if ((x - b.z).norm() > b.h) {
            v.data[(std::size_t(l) * res + j) * res + i] = 0;
            break;
          }
        }
      }
    }
  }
  return v;
}

ReconResult reconstruct(const harmonics::TangentialField& w, double k, const SamplingGrid& grid,
                        const ReconOptions& opts) {
  if (!(k > 0.0)) throw DomainError("k must be positive");
  if (!w.rule) throw DomainError("far field has no quadrature rule");
  if (grid.centers.empty() || grid.radii.empty()) throw DomainError("empty sampling grid");
  opts.policy.validate();
  const int n_z = static_cast<int>(grid.centers.size());
  const int n_h = static_cast<int>(grid.radii.size());
  ReconResult res;
  res.grid = grid;
  res.pairs.resize(std::size_t(n_z) * n_h);
  const double data_norm = field_norm(w);
  res.degenerate_data = !(data_norm > 0.0);
  if (res.degenerate_data) res.log.emplace_back("DegenerateData: far field is identically zero");

  std::vector<std::vector<std::string>> logs(n_z);
  std::atomic<int> next{0};
  int done = 0;
  std::mutex progress_mutex;
  auto worker = [&] {
    for (int j = next++; j < n_z; j = next++) {
      sweep_center(w, k, data_norm, grid, opts, j, &res.pairs[std::size_t(j) * n_h], logs[j]);
      cleanup(&res.pairs[std::size_t(j) * n_h], n_h);
      if (opts.progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        opts.progress(++done, n_z);
      }
    }
  };
  int workers = opts.workers > 0 ? opts.workers : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, n_z);
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  res.critical_radius.assign(n_z, std::numeric_limits<double>::quiet_NaN());
  std::vector<mie::TestBall> smallest;
  for (int j = 0; j < n_z; ++j) {
    for (const auto& line : logs[j]) res.log.push_back(line);
    for (int i = 0; i < n_h; ++i) {
      const PairResult& p = res.pairs[std::size_t(j) * n_h + i];
      if (p.cleaned != Classification::Bounded) continue;
      if (std::isnan(res.critical_radius[j])) {
        res.critical_radius[j] = grid.radii[i];
        smallest.push_back({grid.centers[j], grid.radii[i]});
      }
      res.accepted.push_back({grid.centers[j], grid.radii[i]});
      res.accepted_slope.push_back(p.slope);
      res.accepted_center.push_back(j);
    }
  }
  // The smallest accepted ball per center is contained in every other
  // accepted ball at that center, so the AND over it is the same.
  res.occupancy = voxelize(smallest, grid.R, opts.voxels);
  return res;
}

harmonics::TangentialField add_noise(const harmonics::TangentialField& w, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0)) throw DomainError("noise level must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  harmonics::TangentialField out = w;
  for (CVec3& v : out.values)
    for (int c = 0; c < 3; ++c) v(c) *= 1.0 + delta * Complex(g(rng), g(rng));
  return out;
}

}  // namespace polyscat::recon
