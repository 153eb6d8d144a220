#pragma once

#include <vector>

#include "polyscat/fields.hpp"
#include "polyscat/harmonics.hpp"
#include "polyscat/types.hpp"

/// Electromagnetic scattering by a ball B_h(z): far-field operator
/// eigenvalues, series far and near fields, and the spectral action of the
/// far-field operator.
///
/// Conventions. For incident E = ik ((d x p) x d) e^{ikx.d} the far field is
///
///   E^inf(x) = 4 pi sum_{n,m} ( u_n [p . conj U~_n^m(d)] U~_n^m(x)
///                             + v_n [p . conj V~_n^m(d)] V~_n^m(x) ),
///
/// with U~ = e^{-ikz.x} U (translated basis), so that F U~ = 4 pi u U~ and
/// F V~ = 4 pi v V~. For a perfect conductor u_n = -psi_n'/zeta_n' and
/// v_n = -psi_n/zeta_n evaluated at kh.
namespace polyscat::mie {

enum class BallKind { PEC, Impedance };

struct TestBall {
  Vec3 z = Vec3::Zero();
  double h = 1.0;
};

struct BallSpectrum {
  double k = 1.0;
  double h = 1.0;
  int order = 0;
  BallKind kind = BallKind::PEC;
  double lambda = 0.0;  // impedance only
  std::vector<Complex> u_, v_;  // index n, entry 0 unused

  Complex u(int n) const { return u_[n]; }
  Complex v(int n) const { return v_[n]; }
};

struct GuardReport {
  double kh = 0.0;
  /// Orders n whose j_n(kh) or psi_n'(kh) lies within `tol` (in units of
  /// the argument) of a zero.
  std::vector<int> flagged;
  bool ok() const { return flagged.empty(); }
};

/// Reports interior (Dirichlet/Maxwell) eigenvalues near k for radius h.
/// Distance to the nearest zero is estimated by the Newton step |f / f'|.
GuardReport eigenvalue_guard(double k, double h, int order, double tol = 1e-8);

/// Throws InteriorEigenvalueNear when the guard flags any order, unless
/// `guarded` is false (diagnostic tables only).
BallSpectrum pec_ball_spectrum(double k, double h, int order, bool guarded = true);
/// Impedance condition nu x curl E + i lambda nu x (nu x E) = 0 on |x - z| = h:
///   v_n = -(psi' + i eta psi) / (zeta' + i eta zeta),
///   u_n = -(psi' + (i/eta) psi) / (zeta' + (i/eta) zeta),  eta = lambda / k.
BallSpectrum impedance_ball_spectrum(double k, double h, double lambda, int order);

/// Forward truncation N = ceil(kh + 4 (kh)^{1/3} + 8).
int forward_order(double kh);

/// Analytic far-field coefficients in the basis translated to ball.z.
harmonics::TangentialCoeffs far_field_coeffs(const TestBall& ball, const BallSpectrum& spectrum,
                                             const fields::PlaneWaveParams& pw);
harmonics::TangentialField far_field_ball(const TestBall& ball, const BallSpectrum& spectrum,
                                          const fields::PlaneWaveParams& pw,
                                          const harmonics::QuadraturePtr& rule);
/// Far field of a PEC ball with the forward truncation order.
harmonics::TangentialField far_field_pec_ball(const TestBall& ball, const fields::PlaneWaveParams& pw,
                                              double k, const harmonics::QuadraturePtr& rule);

struct NearField {
  FieldValue scattered;
  FieldValue total;
};
/// Series near field for |x - z| >= h; throws EvalInsideBall otherwise.
NearField near_field_ball(const TestBall& ball, const BallSpectrum& spectrum,
                          const fields::PlaneWaveParams& pw, const Vec3& x);
NearField near_field_pec_ball(const TestBall& ball, const fields::PlaneWaveParams& pw, double k,
                              const Vec3& x);

/// (F g)(x) realized spectrally in the basis translated to z.
harmonics::TangentialField far_field_operator_apply(const BallSpectrum& spectrum, const Vec3& z,
                                                    const harmonics::TangentialField& g);

}  // namespace polyscat::mie
