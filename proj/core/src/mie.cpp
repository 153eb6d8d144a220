#include "polyscat/mie.hpp"

#include <cmath>
#include <string>

#include "polyscat/errors.hpp"
#include "polyscat/specfun.hpp"

namespace polyscat::mie {
namespace {

using harmonics::TangentialCoeffs;

void check_ball(double k, double h, int order) {
  if (!(k > 0.0) || !(h > 0.0)) throw DomainError("k and h must be positive");
  if (order < 1) throw DomainError("spectrum order must be >= 1");
}

Complex ipow(int n) {
  static const Complex table[4] = {1.0, kI, -1.0, -kI};
  return table[((n % 4) + 4) % 4];
}

}  // namespace

GuardReport eigenvalue_guard(double k, double h, int order, double tol) {
  GuardReport report;
  report.kh = k * h;
  const double t = k * h;
  const auto j = specfun::sph_bessel_j_table(std::min(order + 1, specfun::kMaxOrder), t);
  for (int n = 1; n <= order; ++n) {
    const double jn = j[n];
    const double jp = j[n - 1] - (n + 1.0) / t * jn;
    const double psi = t * jn;
    const double psi_p = jn + t * jp;
    // psi'' = (n(n+1)/t^2 - 1) psi from the Riccati-Bessel equation.
    const double psi_pp = (n * (n + 1.0) / (t * t) - 1.0) * psi;
    const bool near_j = std::abs(jn) <= tol * std::abs(jp);
    const bool near_psi_p = std::abs(psi_p) <= tol * std::abs(psi_pp);
    if (near_j || near_psi_p) report.flagged.push_back(n);
  }
  return report;
}

BallSpectrum pec_ball_spectrum(double k, double h, int order, bool guarded) {
  check_ball(k, h, order);
  const GuardReport guard = guarded ? eigenvalue_guard(k, h, order) : GuardReport{};
  if (!guard.ok()) {
    throw InteriorEigenvalueNear("kh = " + std::to_string(k * h) + " is near an interior eigenvalue (order " +
                                 std::to_string(guard.flagged.front()) + ")");
  }
  BallSpectrum s;
  s.k = k;
  s.h = h;
  s.order = order;
  s.kind = BallKind::PEC;
  s.u_.assign(order + 1, 0.0);
  s.v_.assign(order + 1, 0.0);
  const auto r = specfun::riccati_table(order, k * h);
  for (int n = 1; n <= order; ++n) {
    s.u_[n] = -r[n].psi_prime / r[n].zeta_prime;
    s.v_[n] = -r[n].psi / r[n].zeta;
  }
  return s;
}

BallSpectrum impedance_ball_spectrum(double k, double h, double lambda, int order) {
  check_ball(k, h, order);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("impedance must be positive");
  BallSpectrum s;
  s.k = k;
  s.h = h;
  s.order = order;
  s.kind = BallKind::Impedance;
  s.lambda = lambda;
  s.u_.assign(order + 1, 0.0);
  s.v_.assign(order + 1, 0.0);
  const double eta = lambda / k;
  const auto r = specfun::riccati_table(order, k * h);
  for (int n = 1; n <= order; ++n) {
    s.v_[n] = -(r[n].psi_prime + kI * eta * r[n].psi) / (r[n].zeta_prime + kI * eta * r[n].zeta);
    s.u_[n] = -(r[n].psi_prime + kI / eta * r[n].psi) / (r[n].zeta_prime + kI / eta * r[n].zeta);
    if (!std::isfinite(std::abs(s.u_[n])) || !std::isfinite(std::abs(s.v_[n])) || s.u_[n] == 0.0 ||
        s.v_[n] == 0.0) {
      throw InteriorEigenvalueNear("degenerate impedance eigenvalue at order " + std::to_string(n));
    }
  }
  return s;
}

int forward_order(double kh) {
  return static_cast<int>(std::ceil(kh + 4.0 * std::cbrt(kh) + 8.0));
}

TangentialCoeffs far_field_coeffs(const TestBall& ball, const BallSpectrum& spectrum,
                                  const fields::PlaneWaveParams& pw) {
  const int N = spectrum.order;
  const double k = spectrum.k;
  TangentialCoeffs c(ball.z, k, N);
  const auto t = harmonics::vsh_all(N, pw.d);
  // conj(U~(d)) = e^{ikz.d} conj(U(d)).
  const Complex phase = std::polar(1.0, k * ball.z.dot(pw.d));
  const CVec3 p = pw.p.cast<Complex>();
  for (int n = 1; n <= N; ++n) {
    for (int m = -n; m <= n; ++m) {
      const int i = harmonics::flat_index(n, m);
      c.cU[i] = 4.0 * kPi * spectrum.u(n) * phase * t.U[i].dot(p);
      c.cV[i] = 4.0 * kPi * spectrum.v(n) * phase * t.V[i].dot(p);
    }
  }
  return c;
}

harmonics::TangentialField far_field_ball(const TestBall& ball, const BallSpectrum& spectrum,
                                          const fields::PlaneWaveParams& pw,
                                          const harmonics::QuadraturePtr& rule) {
  return harmonics::synthesize(far_field_coeffs(ball, spectrum, pw), rule);
}

harmonics::TangentialField far_field_pec_ball(const TestBall& ball, const fields::PlaneWaveParams& pw,
                                              double k, const harmonics::QuadraturePtr& rule) {
  const auto spectrum = pec_ball_spectrum(k, ball.h, forward_order(k * ball.h));
  return far_field_ball(ball, spectrum, pw, rule);
}

NearField near_field_ball(const TestBall& ball, const BallSpectrum& spectrum,
                          const fields::PlaneWaveParams& pw, const Vec3& x) {
  const double k = spectrum.k;
  const Vec3 rel = x - ball.z;
  const double r = rel.norm();
  if (r < ball.h * (1.0 - 1e-12)) throw EvalInsideBall("near field requested inside the ball");
  const int N = spectrum.order;
  const double t = k * r;
  const Vec3 xhat = rel / r;
  const auto vsh = harmonics::vsh_all(N, xhat);
  const auto din = harmonics::vsh_all(N, pw.d);
  const auto ric = specfun::riccati_table(N, t);
  const CVec3 p = pw.p.cast<Complex>();
  const CVec3 xh = xhat.cast<Complex>();
  // Incident phase at the ball centre.
  const Complex phase = std::polar(1.0, k * ball.z.dot(pw.d));

  CVec3 E = CVec3::Zero(), curlE = CVec3::Zero();
  for (int n = 1; n <= N; ++n) {
    const Complex h = ric[n].zeta / t;
    const double nn = std::sqrt(n * (n + 1.0));
    for (int m = -n; m <= n; ++m) {
      const int i = harmonics::flat_index(n, m);
      // Incident expansion coefficients of ik p_t e^{ik(x-z).d}.
      const Complex alpha = 4.0 * kPi * k * ipow(n + 1) * din.V[i].dot(p) * phase;
      const Complex beta = -4.0 * kPi * k * ipow(n) * din.U[i].dot(p) * phase;
      const Complex a = spectrum.v(n) * alpha;
      const Complex b = spectrum.u(n) * beta;
      const CVec3 M = h * vsh.V[i];
      const CVec3 Nf = -(nn * h / t * vsh.Y[i] * xh + ric[n].zeta_prime / t * vsh.U[i]);
      E += a * M + b * Nf;
      curlE += k * (a * Nf + b * M);
    }
  }
  NearField out;
  out.scattered = {E, curlE / (kI * k)};
  const auto inc = fields::section5_plane_wave(pw, k)(x);
  out.total = {inc.E + out.scattered.E, inc.H + out.scattered.H};
  return out;
}

NearField near_field_pec_ball(const TestBall& ball, const fields::PlaneWaveParams& pw, double k,
                              const Vec3& x) {
  const auto spectrum = pec_ball_spectrum(k, ball.h, forward_order(k * ball.h));
  return near_field_ball(ball, spectrum, pw, x);
}

harmonics::TangentialField far_field_operator_apply(const BallSpectrum& spectrum, const Vec3& z,
                                                    const harmonics::TangentialField& g) {
  TangentialCoeffs c = harmonics::analyze(g, z, spectrum.k, spectrum.order);
  for (int n = 1; n <= spectrum.order; ++n) {
    for (int m = -n; m <= n; ++m) {
      c.u(n, m) *= 4.0 * kPi * spectrum.u(n);
      c.v(n, m) *= 4.0 * kPi * spectrum.v(n);
    }
  }
  return harmonics::synthesize(c, g.rule);
}

}  // namespace polyscat::mie
