#pragma once

#include <functional>
#include <vector>

#include "polyscat/fields.hpp"
#include "polyscat/quadrature.hpp"
#include "polyscat/types.hpp"

/// Reflection across the plane x3 = 0 for solutions satisfying the
/// impedance condition with normal nu = e3:
///   Helmholtz:  d3 u + i lambda u = 0,
///   Maxwell:    nu x curl E + i lambda nu x (nu x E) = 0.
/// Fields are given on x3 >= 0; extensions are evaluated at x3 < 0.
namespace polyscat::reflect {

/// R_Pi x = (x1, x2, -x3).
inline Vec3 mirror(const Vec3& x) { return {x.x(), x.y(), -x.z()}; }

struct ExtensionOptions {
  quad::AdaptiveOptions quadrature{};
  /// Relative guard on |k^2 - lambda^2|.
  double eps_sing = 1e-6;
};

using ScalarFn = std::function<Complex(const Vec3&)>;

/// u~(x) = u(x', -x3) + 2 i lambda e^{-i lambda x3} int_0^{-x3} e^{-i lambda s} u(x', s) ds.
Complex helmholtz_extend(const ScalarFn& u, double k, double lambda, const Vec3& x,
                         const ExtensionOptions& opts = {});

/// (D E)(y) for y3 >= 0, componentwise as in the extension theorem.
/// Uses the field's analytic Jacobian for d_j E3 when present and 6th-order
/// central differences otherwise. Throws SingularParameterCombination when
/// |k^2 - lambda^2| <= eps_sing max(k^2, lambda^2).
CVec3 apply_D(const fields::FieldFn& E, double k, double lambda, const Vec3& y,
              const ExtensionOptions& opts = {});

/// E~(x) = (D E)(x', -x3) for x3 < 0 and E(x) for x3 >= 0.
CVec3 maxwell_extend(const fields::FieldFn& E, double k, double lambda, const Vec3& x,
                     const ExtensionOptions& opts = {});

/// Plane impedance residual nu x curl E + i lambda nu x (nu x E) from E and
/// its Jacobian at a point.
CVec3 impedance_residual(const CVec3& E, const CMat3& jacobian, double lambda);

struct ResidualReport {
  double helmholtz = 0.0;   // max |Lap E + k^2 E| / (k^2 max |E|)
  double divergence = 0.0;  // max |div E| / (k max |E|)
  int points = 0;
};

/// Finite-difference residuals of a vector field over random points in the
/// box [lo, hi] (which must lie in x3 < 0 for an extended field).
ResidualReport extension_residual_check(const std::function<CVec3(const Vec3&)>& field, double k,
                                        const Vec3& lo, const Vec3& hi, int n_points,
                                        unsigned seed = 1);

/// Scalar analogue: max |Lap u + k^2 u| / (k^2 max |u|).
double scalar_residual_check(const ScalarFn& u, double k, const Vec3& lo, const Vec3& hi,
                             int n_points, unsigned seed = 1);

/// Impedance half-space Green tensor for x3, y3 > 0, columns indexed by the
/// dipole direction: G(x, y) + (D G(., y))(R_Pi x), where D acts column-wise
/// on x -> G(x, y) and the result is evaluated at the mirror point. The
/// s-integrals then run over the segment from R_Pi x to the plane, on which
/// G(., y) is smooth.
CMat3 impedance_halfspace_green(const Vec3& x, const Vec3& y, double k, double lambda,
                                const ExtensionOptions& opts = {});

/// Normals nu solving ik nu x (d x p) + i lambda nu x (nu x p) = 0 in the
/// frame p = e1, d x p = e2.
std::vector<Vec3> admissible_normals(double k, double lambda);
/// Residual of the equation above for a given normal.
double admissible_residual(const Vec3& nu, double k, double lambda);

/// Plane-wave field E = p e^{ikx.d} + q e^{ikx.d'} (d' = R_Pi d) with q
/// chosen so that the plane impedance condition holds on x3 = 0.
struct PlaneOracle {
  fields::FieldFn field;
  CVec3 q;
  double bc_residual = 0.0;
};
PlaneOracle impedance_plane_oracle(const Vec3& d, const CVec3& p, double k, double lambda);

}  // namespace polyscat::reflect
