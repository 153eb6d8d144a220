#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "polyscat/types.hpp"

/// Scalar and vector spherical harmonics on the unit sphere, a tensor
/// product quadrature rule, and modal analysis/synthesis of tangential
/// fields in the (possibly translated) basis
///
///   U~_{n,m}^{(z)}(x) = e^{-ik z.x} U_n^m(x),   V~_{n,m}^{(z)}(x) = e^{-ik z.x} V_n^m(x),
///
/// with U_n^m = Grad Y_n^m / sqrt(n(n+1)) and V_n^m = x cross U_n^m.
/// Y_n^m uses the complex e^{i m phi} convention with the Condon-Shortley phase.
namespace polyscat::harmonics {

struct ModeIndex {
  int n = 1;
  int m = 0;
};

/// Number of (n, m) pairs with 1 <= n <= order.
inline int mode_count(int order) { return order * (order + 2); }
/// Flat position of (n, m) in coefficient arrays.
inline int flat_index(int n, int m) { return n * n - 1 + n + m; }

/// Gauss-Legendre in cos(theta) times the uniform trapezoid rule in phi.
class SphereQuadrature {
 public:
  explicit SphereQuadrature(int n_theta = 48);
  SphereQuadrature(int n_theta, int n_phi);

  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  std::size_t size() const { return directions_.size(); }
  /// Highest total spherical-harmonic degree integrated exactly.
  int degree() const { return std::min(2 * n_theta_ - 1, n_phi_ - 1); }

  double theta(int ring) const { return theta_[ring]; }
  double ring_weight(int ring) const { return ring_weight_[ring]; }
  double phi(int j) const { return 2.0 * kPi * j / n_phi_; }
  /// Node index i * n_phi + j for ring i and azimuth j.
  const Vec3& direction(std::size_t node) const { return directions_[node]; }
  double weight(std::size_t node) const { return weights_[node]; }
  const std::vector<Vec3>& directions() const { return directions_; }

  bool same_rule(const SphereQuadrature& other) const {
    return n_theta_ == other.n_theta_ && n_phi_ == other.n_phi_;
  }

 private:
  int n_theta_, n_phi_;
  std::vector<double> theta_, ring_weight_;
  std::vector<Vec3> directions_;
  std::vector<double> weights_;
};

using QuadraturePtr = std::shared_ptr<const SphereQuadrature>;

/// Default 48 x 96 rule, shared.
QuadraturePtr default_rule();
QuadraturePtr make_rule(int n_theta);

/// Complex 3-vectors sampled at the nodes of a rule.
struct TangentialField {
  QuadraturePtr rule;
  std::vector<CVec3> values;

  /// Largest |value . direction| over all nodes.
  double max_radial_component() const;
  double l2_norm() const;
};

/// Coefficients of a tangential field against U~^{(center)}, V~^{(center)}
/// for 1 <= n <= order.
struct TangentialCoeffs {
  Vec3 center = Vec3::Zero();
  double k = 1.0;
  int order = 0;
  std::vector<Complex> cU, cV;

  TangentialCoeffs() = default;
  TangentialCoeffs(Vec3 c, double wavenumber, int n_max)
      : center(std::move(c)), k(wavenumber), order(n_max),
        cU(mode_count(n_max)), cV(mode_count(n_max)) {}

  Complex& u(int n, int m) { return cU[flat_index(n, m)]; }
  Complex& v(int n, int m) { return cV[flat_index(n, m)]; }
  Complex u(int n, int m) const { return cU[flat_index(n, m)]; }
  Complex v(int n, int m) const { return cV[flat_index(n, m)]; }
};

/// (theta, phi) of a unit vector; throws DomainError when |direction| != 1.
std::pair<double, double> spherical_angles(const Vec3& direction);

Complex sph_harm(ModeIndex idx, const Vec3& direction);
CVec3 vsh_U(ModeIndex idx, const Vec3& direction);
CVec3 vsh_V(ModeIndex idx, const Vec3& direction);
/// (U~, V~) at `direction` for translation center z and wavenumber k.
std::pair<CVec3, CVec3> translated_basis(ModeIndex idx, const Vec3& z, double k,
                                         const Vec3& direction);

/// Y_n^m, U_n^m and V_n^m for all 1 <= n <= order at one direction,
/// stored at flat_index(n, m).
struct VshTable {
  int order = 0;
  std::vector<Complex> Y;
  std::vector<CVec3> U, V;
};
VshTable vsh_all(int order, const Vec3& direction);

/// Sum_i w_i f_i . conj(g_i); throws RuleMismatch for different rules.
Complex inner_product(const TangentialField& f, const TangentialField& g);

/// Samples `fn` at every node of `rule`.
TangentialField sample(const QuadraturePtr& rule, const std::function<CVec3(const Vec3&)>& fn);

/// Minimum n_theta for analysing up to `order` with translation |z| at wavenumber k.
int required_n_theta(int order, double k, double z_norm);

/// Projection of f onto the translated basis up to `order`. Throws
/// DegreeTooLow when the rule cannot resolve the requested band.
TangentialCoeffs analyze(const TangentialField& f, const Vec3& z, double k, int order);

/// Evaluates the expansion at the nodes of `rule`.
TangentialField synthesize(const TangentialCoeffs& c, const QuadraturePtr& rule);

}  // namespace polyscat::harmonics
