#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polyscat/harmonics.hpp"
#include "polyscat/recon.hpp"

/// JSON interchange files. Writers are deterministic (fixed key order,
/// shortest round-trip doubles) and every reader validates the whole
/// document before returning; schema violations throw InputError.
namespace polyscat::io {

enum class IncidentType { Plane, Dipole, Herglotz };
enum class Normalization { Section1, Section5 };

struct IncidentSpec {
  IncidentType type = IncidentType::Plane;
  Vec3 d = Vec3::UnitZ();
  Vec3 p = Vec3::UnitX();
  /// Section1: E = p e^{ikx.d}. Section5: E = ik ((d x p) x d) e^{ikx.d}.
  Normalization normalization = Normalization::Section5;
  Vec3 y = Vec3::Zero();  // dipole only
};

/// {"version":1, "k", "incident", "basis_center", "N", "modes", ["samples"]}.
struct FarFieldFile {
  double k = 1.0;
  IncidentSpec incident;
  /// Expansion in the (translated) basis about modes.center, 1 <= n <= N.
  harmonics::TangentialCoeffs modes;
  /// Optional sampled values; must agree with `modes` to 1e-6 relative.
  std::optional<harmonics::TangentialField> samples;
};

std::string to_json(const FarFieldFile& f);
FarFieldFile parse_far_field(const std::string& text);
FarFieldFile load_far_field(const std::string& path);
void save_far_field(const std::string& path, const FarFieldFile& f);

/// E^inf on `rule`: the stored samples when they use that rule, otherwise
/// synthesized from the modes.
harmonics::TangentialField far_field_on(const FarFieldFile& f, const harmonics::QuadraturePtr& rule);

struct AcceptedBall {
  int center = 0;  // index into the sampling grid
  Vec3 z = Vec3::Zero();
  double h = 0.0;
  double slope = 0.0;
};

/// {"accepted":[...], "voxels":{"R","res","data"}, "provenance":{...}}.
/// The voxel bitset packs voxel q = (l res + j) res + i into bit q % 8 of
/// byte q / 8.
struct ReconFile {
  std::vector<AcceptedBall> accepted;  // sorted by (center, h)
  recon::VoxelGrid voxels;
  std::string config_hash;
  std::string tool_version;
};

ReconFile export_result(const recon::ReconResult& r, const std::string& config);
std::string to_json(const ReconFile& f);
ReconFile parse_recon(const std::string& text);
ReconFile load_recon(const std::string& path);
void save_recon(const std::string& path, const ReconFile& f);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
/// Throws InputError on characters outside the standard alphabet or bad padding.
std::vector<std::uint8_t> base64_decode(const std::string& text);

/// 64-bit FNV-1a, 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

/// Writes to a sibling temporary and renames it over `path`.
void write_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

const char* version();

}  // namespace polyscat::io
