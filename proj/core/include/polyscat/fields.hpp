#pragma once

#include <functional>

#include "polyscat/harmonics.hpp"
#include "polyscat/types.hpp"

/// Time-harmonic Maxwell fields (e^{-i omega t} convention) with
/// curl E = ik H and curl H = -ik E.
namespace polyscat::fields {

struct WaveParams {
  double k = 1.0;
  double lambda = 1.0;
  void validate() const;
};

struct PlaneWaveParams {
  Vec3 d = Vec3::UnitZ();
  Vec3 p = Vec3::UnitX();
};

/// An evaluatable (E, H) pair. The optional Jacobian returns J(i, j) = d_j E_i.
class FieldFn {
 public:
  using Eval = std::function<FieldValue(const Vec3&)>;
  using Jacobian = std::function<CMat3(const Vec3&)>;

  FieldFn() = default;
  explicit FieldFn(Eval eval, Jacobian jac = {}) : eval_(std::move(eval)), jac_(std::move(jac)) {}

  FieldValue operator()(const Vec3& x) const { return eval_(x); }
  CVec3 E(const Vec3& x) const { return eval_(x).E; }
  CVec3 H(const Vec3& x) const { return eval_(x).H; }
  bool has_jacobian() const { return static_cast<bool>(jac_); }
  CMat3 jacobian_E(const Vec3& x) const { return jac_(x); }
  explicit operator bool() const { return static_cast<bool>(eval_); }

 private:
  Eval eval_;
  Jacobian jac_;
};

FieldFn operator+(const FieldFn& a, const FieldFn& b);
FieldFn operator*(Complex s, const FieldFn& f);

/// E = p e^{ikx.d}, H = (d x p) e^{ikx.d}; requires |d| = 1 and p.d = 0.
FieldFn plane_wave(const PlaneWaveParams& pw, double k);
/// E = ik ((d x p) x d) e^{ikx.d}; p may have a component along d.
FieldFn section5_plane_wave(const PlaneWaveParams& pw, double k);
/// E = curl(Phi(., y) a), H = (1/ik) curl E.
FieldFn magnetic_dipole(const Vec3& y, const Vec3& a, double k);
/// Column combination E = G(., y) a of the Green tensor (electric dipole).
FieldFn electric_dipole(const Vec3& y, const CVec3& a, double k);
/// E(x) = sum_i w_i e^{ikx.d_i} a(d_i) over the kernel's quadrature nodes.
FieldFn herglotz(const harmonics::TangentialField& kernel, double k);

/// Phi(x, y) = e^{ik|x-y|} / (4 pi |x-y|).
Complex helmholtz_phi(const Vec3& x, const Vec3& y, double k);
/// G = Phi I + (1/k^2) grad grad Phi. Throws EvalAtSource when x is within
/// 1e-10 wavelengths of y.
CMat3 green_tensor(const Vec3& x, const Vec3& y, double k);

/// Radial derivatives of Phi as a function of R = |x - y|, used to build
/// gradients, Hessians and third derivatives in closed form.
struct PhiDerivatives {
  Complex f, f1, f2, f3;
};
PhiDerivatives phi_derivatives(double R, double k);

struct Multipole {
  CVec3 q;
  CVec3 curl_q;
};
/// q_n^m = curl(x h_n(k|x|) Y_n^m(x/|x|)) and its curl.
Multipole multipole_q(harmonics::ModeIndex idx, double k, const Vec3& x);

/// Guard radius shared by every point-source field.
double source_guard(double k);

}  // namespace polyscat::fields
