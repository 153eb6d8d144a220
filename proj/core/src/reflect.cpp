#include "polyscat/reflect.hpp"

#include <array>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "polyscat/errors.hpp"

namespace polyscat::reflect {
namespace {

void check_params(double k, double lambda) {
  if (!(k > 0.0) || !(lambda > 0.0)) throw DomainError("k and lambda must be positive");
}

void check_singular(double k, double lambda, double eps) {
  if (std::abs(k * k - lambda * lambda) <= eps * std::max(k * k, lambda * lambda)) {
    throw SingularParameterCombination("k^2 - lambda^2 vanishes (k = " + std::to_string(k) +
                                       ", lambda = " + std::to_string(lambda) + ")");
  }
}

// Enough subdivisions for integrands oscillating like e^{i w s} over [0, L].
quad::AdaptiveOptions scaled_options(quad::AdaptiveOptions base, double omega, double length) {
  const int needed = static_cast<int>(std::ceil(4.0 * omega * length / kPi)) + 50;
  base.max_subdivisions = std::max(base.max_subdivisions, needed);
  base.noise_scale = std::max(base.noise_scale, omega * length);
  return base;
}

// d_j E3 at x for j = 0, 1 by 6th-order central differences, halving the
// step until two successive estimates agree.
std::array<Complex, 2> transverse_gradient_e3(const fields::FieldFn& E, const Vec3& x, double k) {
  std::array<Complex, 2> out{};
  for (int j = 0; j < 2; ++j) {
    auto stencil = [&](double h) {
      Vec3 e = Vec3::Zero();
      e[j] = h;
      const Complex f1 = E.E(x + e)[2] - E.E(x - e)[2];
      const Complex f2 = E.E(x + 2 * e)[2] - E.E(x - 2 * e)[2];
      const Complex f3 = E.E(x + 3 * e)[2] - E.E(x - 3 * e)[2];
      return (45.0 * f1 - 9.0 * f2 + f3) / (60.0 * h);
    };
    double h = 0.1 / k;
    Complex prev = stencil(h);
    for (int it = 0; it < 6; ++it) {
      h *= 0.5;
      const Complex next = stencil(h);
      const bool settled = std::abs(next - prev) <= 1e-12 * std::max(1.0, std::abs(next));
      prev = next;
      if (settled) break;
    }
    out[j] = prev;
  }
  return out;
}

}  // namespace

Complex helmholtz_extend(const ScalarFn& u, double k, double lambda, const Vec3& x,
                         const ExtensionOptions& opts) {
  check_params(k, lambda);
  if (x.z() >= 0.0) return u(x);
  const double t = -x.z();
  const auto q = quad::integrate(
      [&](double s) { return std::polar(1.0, -lambda * s) * u(Vec3(x.x(), x.y(), s)); }, 0.0, t,
      scaled_options(opts.quadrature, lambda, t));
  return u(Vec3(x.x(), x.y(), t)) + 2.0 * kI * lambda * std::polar(1.0, -lambda * x.z()) * q.value;
}

namespace {

// D without parameter validation; lambda may be negative here.
CVec3 apply_D_unchecked(const fields::FieldFn& E, double k, double lambda, const Vec3& y,
                        const ExtensionOptions& opts) {
  const double y3 = y.z();
  const CVec3 Ey = E.E(y);
  if (y3 == 0.0) return Ey;
  const double kappa_w = k * k / lambda;  // e^{(k^2/i lambda)(s - y3)} = e^{-i kappa_w (s - y3)}
  const bool analytic = E.has_jacobian();
  // Components: 0,1: E_j with e^{-i lambda (s-y3)}; 2,3: d_j E3 with the
  // same weight; 4: E3 with the kappa weight; 5,6: d_j E3 with the kappa weight.
  auto integrand = [&](double s, std::vector<Complex>& out) {
    const Vec3 p(y.x(), y.y(), s);
    const CVec3 e = E.E(p);
    Complex g1, g2;
    if (analytic) {
      const CMat3 J = E.jacobian_E(p);
      g1 = J(2, 0);
      g2 = J(2, 1);
    } else {
      const auto g = transverse_gradient_e3(E, p, k);
      g1 = g[0];
      g2 = g[1];
    }
    const Complex wl = std::polar(1.0, -lambda * (s - y3));
    const Complex wk = std::polar(1.0, -kappa_w * (s - y3));
    out[0] = wl * e[0];
    out[1] = wl * e[1];
    out[2] = wl * g1;
    out[3] = wl * g2;
    out[4] = wk * e[2];
    out[5] = wk * g1;
    out[6] = wk * g2;
  };
  const double w = std::max(std::abs(lambda), std::abs(kappa_w));
  auto qopts = scaled_options(opts.quadrature, w, std::abs(y3));
  // The lambda-weighted integrals are multiplied by up to 2 lambda.
  qopts.abs_tol = opts.quadrature.abs_tol / std::max(1.0, 2.0 * std::abs(lambda));
  const auto I = quad::integrate_vector(integrand, 7, 0.0, y3, qopts).value;
  const double denom = k * k - lambda * lambda;
  CVec3 out;
  for (int j = 0; j < 2; ++j) {
    out[j] = Ey[j] + 2.0 * kI * lambda * I[j] + (2.0 * lambda * lambda / denom) * I[2 + j] -
             (2.0 * k * k / denom) * I[5 + j];
  }
  out[2] = Ey[2] - (2.0 * k * k / (kI * lambda)) * I[4];
  return out;
}

}  // namespace

CVec3 apply_D(const fields::FieldFn& E, double k, double lambda, const Vec3& y,
              const ExtensionOptions& opts) {
  check_params(k, lambda);
  check_singular(k, lambda, opts.eps_sing);
  return apply_D_unchecked(E, k, lambda, y, opts);
}

CVec3 maxwell_extend(const fields::FieldFn& E, double k, double lambda, const Vec3& x,
                     const ExtensionOptions& opts) {
  if (x.z() >= 0.0) return E.E(x);
  return apply_D(E, k, lambda, mirror(x), opts);
}

CVec3 impedance_residual(const CVec3& E, const CMat3& J, double lambda) {
  const CVec3 curl(J(2, 1) - J(1, 2), J(0, 2) - J(2, 0), J(1, 0) - J(0, 1));
  const CVec3 nu(0, 0, 1);
  return cross(nu, curl) + kI * lambda * cross(nu, cross(nu, E));
}

ResidualReport extension_residual_check(const std::function<CVec3(const Vec3&)>& field, double k,
                                        const Vec3& lo, const Vec3& hi, int n_points, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double h = 0.02 / k;
  ResidualReport rep;
  double scale = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const Vec3 x = lo + Vec3(u(rng), u(rng), u(rng)).cwiseProduct(hi - lo);
    const CVec3 c = field(x);
    CVec3 lap = CVec3::Zero();
    Complex div = 0.0;
    for (int j = 0; j < 3; ++j) {
      Vec3 e = Vec3::Zero();
      e[j] = h;
      const CVec3 p1 = field(x + e), m1 = field(x - e), p2 = field(x + 2 * e), m2 = field(x - 2 * e);
      lap += (-p2 + 16.0 * p1 - 30.0 * c + 16.0 * m1 - m2) / (12.0 * h * h);
      div += (-p2[j] + 8.0 * p1[j] - 8.0 * m1[j] + m2[j]) / (12.0 * h);
    }
    scale = std::max(scale, c.norm());
    rep.helmholtz = std::max(rep.helmholtz, (lap + k * k * c).norm());
    rep.divergence = std::max(rep.divergence, std::abs(div));
    ++rep.points;
  }
  if (scale > 0.0) {
    rep.helmholtz /= k * k * scale;
    rep.divergence /= k * scale;
  }
  return rep;
}

double scalar_residual_check(const ScalarFn& f, double k, const Vec3& lo, const Vec3& hi, int n_points,
                             unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double h = 0.02 / k;
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const Vec3 x = lo + Vec3(u(rng), u(rng), u(rng)).cwiseProduct(hi - lo);
    const Complex c = f(x);
    Complex lap = 0.0;
    for (int j = 0; j < 3; ++j) {
      Vec3 e = Vec3::Zero();
      e[j] = h;
      lap += (-f(x + 2 * e) + 16.0 * f(x + e) - 30.0 * c + 16.0 * f(x - e) - f(x - 2 * e)) / (12.0 * h * h);
    }
    scale = std::max(scale, std::abs(c));
    worst = std::max(worst, std::abs(lap + k * k * c));
  }
  return scale > 0.0 ? worst / (k * k * scale) : worst;
}

namespace detail {

// G(x, y) + (D G(., y))(R_Pi x): D acts on x -> G(x, y) a through points on
// the segment between R_Pi x and the plane, where G(., y) is smooth.
CMat3 halfspace_green_with(const Vec3& x, const Vec3& y, double k, double lambda_d,
                           const ExtensionOptions& opts) {
  CMat3 out = fields::green_tensor(x, y, k);
  for (int c = 0; c < 3; ++c) {
    CVec3 a = CVec3::Zero();
    a[c] = 1.0;
    out.col(c) += apply_D_unchecked(fields::electric_dipole(y, a, k), k, lambda_d, mirror(x), opts);
  }
  return out;
}

}  // namespace detail

CMat3 impedance_halfspace_green(const Vec3& x, const Vec3& y, double k, double lambda,
                                const ExtensionOptions& opts) {
  check_params(k, lambda);
  check_singular(k, lambda, opts.eps_sing);
  if (!(x.z() > 0.0) || !(y.z() > 0.0)) throw DomainError("half-space Green tensor needs x3, y3 > 0");
  return detail::halfspace_green_with(x, y, k, lambda, opts);
}

std::vector<Vec3> admissible_normals(double k, double lambda) {
  check_params(k, lambda);
  if (k == lambda) return {Vec3(0, 0, -1)};
  if (k < lambda) {
    const double r = k / lambda;
    const double s = std::sqrt(1.0 - r * r);
    return {Vec3(s, 0, -r), Vec3(-s, 0, -r)};
  }
  const double r = lambda / k;
  const double s = std::sqrt(1.0 - r * r);
  return {Vec3(0, s, -r), Vec3(0, -s, -r)};
}

double admissible_residual(const Vec3& nu, double k, double lambda) {
  const CVec3 p(1, 0, 0), dxp(0, 1, 0);
  const CVec3 n = nu.cast<Complex>();
  return (kI * k * cross(n, dxp) + kI * lambda * cross(n, cross(n, p))).norm();
}

PlaneOracle impedance_plane_oracle(const Vec3& d, const CVec3& p, double k, double lambda) {
  check_params(k, lambda);
  if (std::abs(d.norm() - 1.0) > 1e-12) throw DomainError("direction must be a unit vector");
  if (std::abs(p.dot(d.cast<Complex>())) > 1e-10) throw InvalidPolarization("p must be orthogonal to d");
  const Vec3 dr = mirror(d);
  // Residual at x = 0 of a single plane wave amplitude a along direction dir.
  auto bc = [&](const Vec3& dir, const CVec3& a) {
    const CMat3 J = (kI * k) * a * dir.cast<Complex>().transpose();
    return impedance_residual(a, J, lambda);
  };
  Eigen::Matrix3cd A;
  Eigen::Vector3cd rhs;
  const CVec3 r0 = bc(d, p);
  for (int c = 0; c < 3; ++c) {
    CVec3 e = CVec3::Zero();
    e[c] = 1.0;
    const CVec3 col = bc(dr, e);
    A(0, c) = col[0];
    A(1, c) = col[1];
    A(2, c) = dr[c];
  }
  rhs << -r0[0], -r0[1], 0.0;
  const CVec3 q = A.fullPivLu().solve(rhs);
  PlaneOracle out;
  out.q = q;
  out.bc_residual = (r0 + bc(dr, q)).norm();
  const CVec3 hp = cross(d.cast<Complex>(), p), hq = cross(dr.cast<Complex>(), q);
  out.field = fields::FieldFn(
      [=](const Vec3& x) {
        const Complex e1 = std::polar(1.0, k * x.dot(d)), e2 = std::polar(1.0, k * x.dot(dr));
        return FieldValue{e1 * p + e2 * q, e1 * hp + e2 * hq};
      },
      [=](const Vec3& x) -> CMat3 {
        const Complex e1 = std::polar(1.0, k * x.dot(d)), e2 = std::polar(1.0, k * x.dot(dr));
        return (kI * k * e1) * p * d.cast<Complex>().transpose() +
               (kI * k * e2) * q * dr.cast<Complex>().transpose();
      });
  return out;
}

}  // namespace polyscat::reflect
