#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "polyscat/fields.hpp"
#include "polyscat/harmonics.hpp"

/// Synthetic far-field data for convex polyhedral impedance scatterers by
/// the method of fundamental solutions: electric dipoles on a shrunk copy of
/// the boundary, fitted so that the total field satisfies
///   nu x curl E + i lambda nu x (nu x E) = 0   on dD.
namespace polyscat::forward {

struct SurfacePoint {
  Vec3 x;
  Vec3 normal;
  /// Normal interpolated from vertex normals; equals `normal` on smooth
  /// boundaries.
  Vec3 smooth_normal;
  int face = 0;
  /// Distance to the nearest edge of the face (infinite on smooth boundaries).
  double edge_distance = std::numeric_limits<double>::infinity();
};

/// Which normal the boundary condition uses. Interpolated treats a fine
/// mesh as a discretization of a smooth surface (e.g. an icosphere for a
/// ball); Face is the polyhedron itself.
enum class NormalMode { Face, Interpolated };

/// A closed convex surface the solver can sample.
class Boundary {
 public:
  virtual ~Boundary() = default;
  virtual Vec3 centroid() const = 0;
  /// n random points, uniform in area.
  virtual std::vector<SurfacePoint> sample(int n, std::uint64_t seed) const = 0;
  /// Boundary point on the ray from the centroid along the unit vector dir.
  virtual SurfacePoint ray_hit(const Vec3& dir) const = 0;
};

/// Closed convex polyhedron with outward face normals.
class Polyhedron : public Boundary {
 public:
  Polyhedron() = default;
  /// Computes normals and validates: every edge shared by exactly two faces
  /// with opposite orientation (InputError otherwise), convexity within
  /// 1e-10 relative to the diameter (NonConvexInput), outward orientation
  /// (faces are flipped consistently when all point inward). Convexity is
  /// checked against every vertex for small meshes; for large ones, against
  /// the vertices of edge-adjacent faces, which together with every face
  /// facing away from the centroid is sufficient for a closed surface.
  Polyhedron(std::vector<Vec3> vertices, std::vector<std::vector<int>> faces);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<std::vector<int>>& faces() const { return faces_; }
  const std::vector<Vec3>& normals() const { return normals_; }
  /// Vertex average; inside for a convex polyhedron.
  Vec3 centroid() const override { return centroid_; }
  /// Twice the largest vertex distance from the centroid; between one and
  /// two diameters.
  double diameter() const { return diameter_; }
  double area() const { return total_area_; }

  /// Fan triangulation of each face, area weighted.
  std::vector<SurfacePoint> sample(int n, std::uint64_t seed) const override;
  SurfacePoint ray_hit(const Vec3& dir) const override;
  /// Signed distance to the face planes (max over faces), < 0 inside.
  double plane_distance(const Vec3& x) const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<std::vector<int>> faces_;
  std::vector<Vec3> normals_;
  std::vector<double> tri_area_cdf_;  // cumulative fan-triangle areas
  std::vector<std::array<int, 4>> tris_;  // face, v0, v1, v2
  std::vector<Vec3> vertex_normals_;
  double edge_distance(int face, const Vec3& x) const;
  Vec3 centroid_ = Vec3::Zero();
  double diameter_ = 0.0;
  double total_area_ = 0.0;
};

/// Exact sphere, for separating solver error from faceting error.
class SphereBoundary : public Boundary {
 public:
  SphereBoundary(const Vec3& center, double radius);
  Vec3 centroid() const override { return center_; }
  std::vector<SurfacePoint> sample(int n, std::uint64_t seed) const override;
  SurfacePoint ray_hit(const Vec3& dir) const override { return {center_ + radius_ * dir, dir, dir, 0}; }

 private:
  Vec3 center_;
  double radius_;
};

/// OFF text: "OFF", "<nv> <nf> 0", nv vertex lines, nf face lines
/// "<count> i0 i1 ..." (0-based). Throws InputError on malformed input.
Polyhedron parse_off(std::istream& in);
Polyhedron load_off(const std::string& path);
void write_off(std::ostream& out, const Polyhedron& poly);

/// Subdivided icosahedron with vertices on the sphere of the given radius.
Polyhedron icosphere(double radius, int subdivisions, const Vec3& center = Vec3::Zero());
/// Axis-aligned cube [-half, half]^3 + center.
Polyhedron cube(double half, const Vec3& center = Vec3::Zero());

struct MFSConfig {
  int n_sources = 400;
  /// Sources sit at c + shrink (x - c) for boundary points x, c the centroid.
  double source_shrink = 0.6;
  int n_collocation = 1600;
  /// Tikhonov parameter relative to the largest singular value. Negative
  /// selects it by an L-curve scan over 1e-14 ... 1e-6; zero is plain least
  /// squares.
  double tikhonov = -1.0;
  std::uint64_t seed = 1;
  /// IllConditioned is thrown when the relative collocation residual ends
  /// above this.
  double max_residual = 1e-2;
  NormalMode normals = NormalMode::Face;
  /// Collocation rows are weighted by (d / (d + l))^edge_weight with d the
  /// distance to the nearest edge and l = edge_scale times the boundary
  /// size. The exact field is singular along edges; without weights the
  /// least-squares fit chases it and degrades everywhere. Face mode only.
  double edge_weight = 0.0;
  double edge_scale = 0.05;
  /// Dipoles per source: the two tangent directions, or those plus the normal.
  int orientations = 2;

  void validate() const;
};

struct MFSSolution {
  double k = 1.0;
  double lambda = 1.0;
  std::vector<Vec3> sources;
  /// Dipole directions per source, `orientations` consecutive entries each.
  int orientations = 2;
  std::vector<Vec3> directions;
  Eigen::VectorXcd coeffs;
  /// Relative boundary residual at the collocation points.
  double collocation_residual = 0.0;
  /// Chosen Tikhonov parameter relative to sigma_max.
  double tikhonov = 0.0;
  double condition = 0.0;
  NormalMode normals = NormalMode::Face;
};

MFSSolution mfs_solve(const Boundary& boundary, const fields::WaveParams& wp, const fields::FieldFn& incident,
                      const MFSConfig& cfg = {});

/// Scattered field of the dipole sources.
FieldValue mfs_scattered(const MFSSolution& sol, const Vec3& x);

/// E^inf(x) = (1/4 pi) sum e^{-ik x.y} (I - x x^T) a over the sources.
harmonics::TangentialField mfs_farfield(const MFSSolution& sol, const harmonics::QuadraturePtr& rule);

/// Max over fresh random boundary points of |residual| / max |incident residual|.
double held_out_residual(const MFSSolution& sol, const Boundary& boundary, const fields::WaveParams& wp,
                         const fields::FieldFn& incident, int n_points, std::uint64_t seed = 99);

}  // namespace polyscat::forward
