#pragma once

#include <cstdint>
#include <vector>

#include "polyscat/reflect.hpp"

/// Oracle suites for the reflection operator, shared by the command-line
/// tool and the acceptance tests. Each returns measured numbers; deciding
/// pass or fail is left to the caller.
namespace polyscat::verify {

struct OracleSuiteOptions {
  int fields = 20;
  /// Points per axis of the lattice in [-1, 1]^2 x [-1, -0.05].
  int lattice = 10;
  /// Plane points per field for the Cauchy-data jumps.
  int jump_points = 3;
  /// Random points per field for the finite-difference residuals.
  int fd_points = 3;
  std::uint64_t seed = 1;
  /// When both are positive every field uses them; otherwise k and lambda
  /// are drawn from [0.5, 3] x [0.3, 3] with |k - lambda| > 0.1.
  double k = 0.0;
  double lambda = 0.0;
};

struct OracleSuiteReport {
  int fields = 0;
  int points = 0;
  /// max |D E - E_exact| over the lattice, relative to max |E_exact|.
  double max_error = 0.0;
  double max_value_jump = 0.0;
  /// One-sided 4th-order d3 derivatives from both sides, relative.
  double max_normal_jump = 0.0;
  /// Residuals of the extended field and of the exact field (the stencil
  /// floor) at the same points.
  double helmholtz = 0.0, divergence = 0.0;
  double helmholtz_floor = 0.0, divergence_floor = 0.0;
  double max_bc_residual = 0.0;
};

OracleSuiteReport reflection_oracle_suite(const OracleSuiteOptions& opts = {});

struct SlopeReport {
  std::vector<double> lambdas;
  /// sup over sample points of |D E + R E(R .)| with R = diag(1, 1, -1).
  std::vector<double> errors;
  double slope = 0.0;  // least squares in log-log
};

SlopeReport dirichlet_limit(double k, const std::vector<double>& lambdas, std::uint64_t seed = 11);

struct GreenReport {
  int points = 0;
  /// max over plane points of |nu x curl G a + i lambda nu x (nu x G a)| / |G a|.
  double max_bc = 0.0;
  /// max |Lap G a + k^2 G a| / (k^2 |G a|) and |div G a| / (k |G a|) at
  /// points away from the source; the free-space tensor at the same points
  /// gives the stencil floor.
  double helmholtz = 0.0, divergence = 0.0;
  double free_space_helmholtz = 0.0;
};

GreenReport green_check(double k, double lambda, int n_points, std::uint64_t seed = 5);

/// max over normals of admissible_residual, and the normals themselves.
struct NormalsReport {
  std::vector<Vec3> normals;
  double max_residual = 0.0;
};

NormalsReport normals_check(double k, double lambda);

}  // namespace polyscat::verify
