#include "polyscat/fields.hpp"

#include <cmath>
#include <string>

#include "polyscat/errors.hpp"
#include "polyscat/specfun.hpp"

namespace polyscat::fields {
namespace {

void check_direction(const Vec3& d) {
  if (std::abs(d.norm() - 1.0) > 1e-10) throw DomainError("incident direction must be a unit vector");
}

void check_k(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("wavenumber must be positive");
}

// Third derivatives d_a d_b d_c Phi, contracted with a vector v over c:
// returns T with T(a, b) = sum_c d_a d_b d_c Phi v_c.
CMat3 third_contract(const PhiDerivatives& p, const Vec3& rv, double R, const Vec3& v) {
  // rv is the raw offset x - y, not the unit vector.
  const Complex A = (p.f2 - p.f1 / R) / (R * R);
  const Complex dA = (p.f3 - p.f2 / R + p.f1 / (R * R)) / (R * R) - 2.0 * (p.f2 - p.f1 / R) / (R * R * R);
  const Complex dB = R * A;
  const double rv_dot = rv.dot(v);
  CMat3 T;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      Complex t = dA / R * rv_dot * rv[a] * rv[b];
      t += A * (v[a] * rv[b] + v[b] * rv[a]);
      if (a == b) t += dB / R * rv_dot;
      T(a, b) = t;
    }
  }
  return T;
}

CMat3 hessian(const PhiDerivatives& p, const Vec3& rhat, double R) {
  const Eigen::Matrix3d rr = rhat * rhat.transpose();
  return p.f2 * rr.cast<Complex>() + (p.f1 / R) * (Eigen::Matrix3d::Identity() - rr).cast<Complex>();
}

Vec3 checked_offset(const Vec3& x, const Vec3& y, double k) {
  const Vec3 r = x - y;
  if (r.norm() < source_guard(k)) {
    throw EvalAtSource("evaluation point coincides with a source point");
  }
  return r;
}

}  // namespace

void WaveParams::validate() const {
  check_k(k);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("impedance must be positive");
}

double source_guard(double k) { return 1e-10 * 2.0 * kPi / k; }

FieldFn operator+(const FieldFn& a, const FieldFn& b) {
  FieldFn::Jacobian jac;
  if (a.has_jacobian() && b.has_jacobian()) {
    jac = [a, b](const Vec3& x) -> CMat3 { return a.jacobian_E(x) + b.jacobian_E(x); };
  }
  return FieldFn(
      [a, b](const Vec3& x) {
        const FieldValue u = a(x), v = b(x);
        return FieldValue{u.E + v.E, u.H + v.H};
      },
      jac);
}

FieldFn operator*(Complex s, const FieldFn& f) {
  FieldFn::Jacobian jac;
  if (f.has_jacobian()) jac = [s, f](const Vec3& x) -> CMat3 { return s * f.jacobian_E(x); };
  return FieldFn(
      [s, f](const Vec3& x) {
        const FieldValue u = f(x);
        return FieldValue{s * u.E, s * u.H};
      },
      jac);
}

FieldFn plane_wave(const PlaneWaveParams& pw, double k) {
  check_k(k);
  check_direction(pw.d);
  if (std::abs(pw.p.dot(pw.d)) > 1e-10) {
    throw InvalidPolarization("polarization must be orthogonal to the incident direction");
  }
  const CVec3 p = pw.p.cast<Complex>();
  const CVec3 q = cross(pw.d, pw.p).cast<Complex>();
  const Vec3 d = pw.d;
  return FieldFn(
      [=](const Vec3& x) {
        const Complex e = std::polar(1.0, k * x.dot(d));
        return FieldValue{p * e, q * e};
      },
      [=](const Vec3& x) -> CMat3 {
        const Complex e = std::polar(1.0, k * x.dot(d));
        return (kI * k * e) * p * d.cast<Complex>().transpose();
      });
}

FieldFn section5_plane_wave(const PlaneWaveParams& pw, double k) {
  check_k(k);
  check_direction(pw.d);
  const Vec3 d = pw.d;
  const CVec3 amp = (kI * k) * cross(cross(d, pw.p), d).cast<Complex>();
  const CVec3 hamp = (kI * k) * cross(d, pw.p).cast<Complex>();
  return FieldFn(
      [=](const Vec3& x) {
        const Complex e = std::polar(1.0, k * x.dot(d));
        return FieldValue{amp * e, hamp * e};
      },
      [=](const Vec3& x) -> CMat3 {
        const Complex e = std::polar(1.0, k * x.dot(d));
        return (kI * k * e) * amp * d.cast<Complex>().transpose();
      });
}

PhiDerivatives phi_derivatives(double R, double k) {
  PhiDerivatives p;
  const Complex c = kI * k - 1.0 / R;
  p.f = std::polar(1.0, k * R) / (4.0 * kPi * R);
  p.f1 = p.f * c;
  const Complex s = c * c + 1.0 / (R * R);
  p.f2 = p.f * s;
  p.f3 = p.f1 * s + p.f * (2.0 * c / (R * R) - 2.0 / (R * R * R));
  return p;
}

Complex helmholtz_phi(const Vec3& x, const Vec3& y, double k) {
  const double R = checked_offset(x, y, k).norm();
  return std::polar(1.0, k * R) / (4.0 * kPi * R);
}

CMat3 green_tensor(const Vec3& x, const Vec3& y, double k) {
  check_k(k);
  const Vec3 r = checked_offset(x, y, k);
  const double R = r.norm();
  const auto p = phi_derivatives(R, k);
  return p.f * CMat3::Identity() + hessian(p, r / R, R) / (k * k);
}

FieldFn magnetic_dipole(const Vec3& y, const Vec3& a, double k) {
  check_k(k);
  if (a.norm() == 0.0) throw DomainError("dipole moment must be nonzero");
  return FieldFn(
      [=](const Vec3& x) {
        const Vec3 r = checked_offset(x, y, k);
        const double R = r.norm();
        const auto p = phi_derivatives(R, k);
        const CVec3 grad = p.f1 * (r / R).cast<Complex>();
        const CMat3 G = p.f * CMat3::Identity() + hessian(p, r / R, R) / (k * k);
        return FieldValue{cross(grad, a.cast<Complex>()), (-kI * k) * (G * a.cast<Complex>())};
      },
      [=](const Vec3& x) -> CMat3 {
        const Vec3 r = checked_offset(x, y, k);
        const double R = r.norm();
        const CMat3 Hs = hessian(phi_derivatives(R, k), r / R, R);
        CMat3 J;
        for (int j = 0; j < 3; ++j) J.col(j) = cross(Hs.col(j), a.cast<Complex>());
        return J;
      });
}

FieldFn electric_dipole(const Vec3& y, const CVec3& a, double k) {
  check_k(k);
  return FieldFn(
      [=](const Vec3& x) {
        const Vec3 r = checked_offset(x, y, k);
        const double R = r.norm();
        const auto p = phi_derivatives(R, k);
        const CMat3 G = p.f * CMat3::Identity() + hessian(p, r / R, R) / (k * k);
        const CVec3 grad = p.f1 * (r / R).cast<Complex>();
        // curl(G a) = curl(Phi a) = grad Phi x a.
        return FieldValue{G * a, cross(grad, a) / (kI * k)};
      },
      [=](const Vec3& x) -> CMat3 {
        const Vec3 r = checked_offset(x, y, k);
        const double R = r.norm();
        const auto p = phi_derivatives(R, k);
        const Vec3 rhat = r / R;
        const CVec3 grad = p.f1 * rhat.cast<Complex>();
        // d_j (Phi a_i + (1/k^2) sum_b d_i d_b Phi a_b)
        CMat3 J = a * grad.transpose();
        for (int j = 0; j < 3; ++j) {
          Vec3 e = Vec3::Zero();
          e[j] = 1.0;
          const CMat3 T = third_contract(p, r, R, e);  // T(i, b) = d_i d_b d_j Phi
          J.col(j) += (T * a) / (k * k);
        }
        return J;
      });
}

FieldFn herglotz(const harmonics::TangentialField& kernel, double k) {
  check_k(k);
  if (!kernel.rule || kernel.values.size() != kernel.rule->size()) {
    throw RuleMismatch("Herglotz kernel does not match its quadrature rule");
  }
  const auto rule = kernel.rule;
  std::vector<CVec3> wa(kernel.values.size()), wda(kernel.values.size());
  for (std::size_t i = 0; i < wa.size(); ++i) {
    wa[i] = rule->weight(i) * kernel.values[i];
    wda[i] = cross(rule->direction(i).cast<Complex>(), wa[i]);
  }
  return FieldFn(
      [=](const Vec3& x) {
        FieldValue out;
        for (std::size_t i = 0; i < wa.size(); ++i) {
          const Complex e = std::polar(1.0, k * x.dot(rule->direction(i)));
          out.E += e * wa[i];
          out.H += e * wda[i];
        }
        return out;
      },
      [=](const Vec3& x) -> CMat3 {
        CMat3 J = CMat3::Zero();
        for (std::size_t i = 0; i < wa.size(); ++i) {
          const Vec3& d = rule->direction(i);
          const Complex e = std::polar(1.0, k * x.dot(d));
          J += (kI * k * e) * wa[i] * d.cast<Complex>().transpose();
        }
        return J;
      });
}

Multipole multipole_q(harmonics::ModeIndex idx, double k, const Vec3& x) {
  check_k(k);
  const double r = x.norm();
  if (r < source_guard(k)) throw EvalAtSource("multipole evaluated at the origin");
  const Vec3 xhat = x / r;
  const double t = k * r;
  const auto ric = specfun::riccati(idx.n, t);
  const Complex h = ric.zeta / t;
  const double nn = std::sqrt(idx.n * (idx.n + 1.0));
  const CVec3 U = harmonics::vsh_U(idx, xhat);
  const CVec3 V = harmonics::vsh_V(idx, xhat);
  const Complex Y = harmonics::sph_harm(idx, xhat);
  Multipole out;
  out.q = -nn * h * V;
  out.curl_q = nn * k * (nn * h / t * Y * xhat.cast<Complex>() + ric.zeta_prime / t * U);
  return out;
}

}  // namespace polyscat::fields
