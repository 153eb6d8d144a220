#include "polyscat/harmonics.hpp"

#include <cmath>
#include <algorithm>
#include <string>

#include "polyscat/errors.hpp"
#include "polyscat/quadrature.hpp"
#include "polyscat/specfun.hpp"

namespace polyscat::harmonics {
namespace {

double parity(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

// Legendre quantities for signed m.
struct SignedLegendre {
  double p, dp, mps;
};

SignedLegendre signed_legendre(const specfun::LegendreTable& t, int n, int m) {
  if (m >= 0) return {t.p(n, m), t.dp_dtheta(n, m), t.m_p_over_sin(n, m)};
  const int am = -m;
  const double s = parity(am);
  return {s * t.p(n, am), s * t.dp_dtheta(n, am), -s * t.m_p_over_sin(n, am)};
}

Vec3 theta_hat(double theta, double phi) {
  return {std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta)};
}

Vec3 phi_hat(double phi) { return {-std::sin(phi), std::cos(phi), 0.0}; }

void check_mode(ModeIndex idx) {
  if (idx.n < 1) throw DomainError("vector spherical harmonics need n >= 1");
  if (std::abs(idx.m) > idx.n) throw DomainError("|m| > n in mode index");
}

// Spherical components (theta, phi) of U_n^m and V_n^m at given angles.
std::pair<CVec3, CVec3> vsh_pair(ModeIndex idx, double theta, double phi) {
  check_mode(idx);
  const specfun::LegendreTable table(idx.n, theta);
  const auto [p, dp, mps] = signed_legendre(table, idx.n, idx.m);
  const double norm = 1.0 / std::sqrt(idx.n * (idx.n + 1.0));
  const Complex e = std::polar(norm, idx.m * phi);
  const Vec3 th = theta_hat(theta, phi);
  const Vec3 ph = phi_hat(phi);
  const Complex u_th = e * dp;
  const Complex u_ph = e * kI * mps;
  const CVec3 U = u_th * th.cast<Complex>() + u_ph * ph.cast<Complex>();
  const CVec3 V = u_th * ph.cast<Complex>() - u_ph * th.cast<Complex>();
  (void)p;
  return {U, V};
}

}  // namespace

SphereQuadrature::SphereQuadrature(int n_theta) : SphereQuadrature(n_theta, 2 * n_theta) {}

SphereQuadrature::SphereQuadrature(int n_theta, int n_phi) : n_theta_(n_theta), n_phi_(n_phi) {
  if (n_theta < 1 || n_phi < 1) throw DomainError("sphere quadrature needs positive node counts");
  const auto gl = quad::gauss_legendre(n_theta);
  theta_.resize(n_theta);
  ring_weight_.resize(n_theta);
  // Ring 0 is nearest the north pole.
  for (int i = 0; i < n_theta; ++i) {
    const int src = n_theta - 1 - i;
    theta_[i] = std::acos(gl.nodes[src]);
    ring_weight_[i] = gl.weights[src];
  }
  directions_.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  weights_.reserve(directions_.capacity());
  const double dphi = 2.0 * kPi / n_phi;
  for (int i = 0; i < n_theta; ++i) {
    const double st = std::sin(theta_[i]), ct = std::cos(theta_[i]);
    for (int j = 0; j < n_phi; ++j) {
      const double ph = phi(j);
      directions_.emplace_back(st * std::cos(ph), st * std::sin(ph), ct);
      weights_.push_back(ring_weight_[i] * dphi);
    }
  }
}

QuadraturePtr make_rule(int n_theta) { return std::make_shared<const SphereQuadrature>(n_theta); }

QuadraturePtr default_rule() {
  static const QuadraturePtr rule = make_rule(48);
  return rule;
}

double TangentialField::max_radial_component() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    worst = std::max(worst, std::abs(values[i].dot(rule->direction(i).cast<Complex>())));
  }
  return worst;
}

double TangentialField::l2_norm() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) acc += rule->weight(i) * values[i].squaredNorm();
  return std::sqrt(acc);
}

std::pair<double, double> spherical_angles(const Vec3& direction) {
  const double r = direction.norm();
  if (std::abs(r - 1.0) > 1e-8) {
    throw DomainError("direction is not a unit vector (|d| = " + std::to_string(r) + ")");
  }
  const double theta = std::acos(std::clamp(direction.z() / r, -1.0, 1.0));
  const double phi = std::atan2(direction.y(), direction.x());
  return {theta, phi};
}

Complex sph_harm(ModeIndex idx, const Vec3& direction) {
  if (idx.n < 0 || std::abs(idx.m) > idx.n) throw DomainError("invalid (n, m) for Y_n^m");
  const auto [theta, phi] = spherical_angles(direction);
  return specfun::assoc_legendre_normalized(idx.n, idx.m, std::cos(theta)) *
         std::polar(1.0, idx.m * phi);
}

CVec3 vsh_U(ModeIndex idx, const Vec3& direction) {
  const auto [theta, phi] = spherical_angles(direction);
  return vsh_pair(idx, theta, phi).first;
}

CVec3 vsh_V(ModeIndex idx, const Vec3& direction) {
  const auto [theta, phi] = spherical_angles(direction);
  return vsh_pair(idx, theta, phi).second;
}

VshTable vsh_all(int order, const Vec3& direction) {
  if (order < 1) throw DomainError("vector spherical harmonics need n >= 1");
  const auto [theta, phi] = spherical_angles(direction);
  const specfun::LegendreTable table(order, theta);
  const CVec3 th = theta_hat(theta, phi).cast<Complex>();
  const CVec3 ph = phi_hat(phi).cast<Complex>();
  VshTable out;
  out.order = order;
  const int count = mode_count(order);
  out.Y.resize(count);
  out.U.resize(count);
  out.V.resize(count);
  for (int n = 1; n <= order; ++n) {
    const double norm = 1.0 / std::sqrt(n * (n + 1.0));
    for (int m = -n; m <= n; ++m) {
      const auto [p, dp, mps] = signed_legendre(table, n, m);
      const Complex e = std::polar(1.0, m * phi);
      const Complex u_th = norm * e * dp;
      const Complex u_ph = norm * e * kI * mps;
      const int i = flat_index(n, m);
      out.Y[i] = p * e;
      out.U[i] = u_th * th + u_ph * ph;
      out.V[i] = u_th * ph - u_ph * th;
    }
  }
  return out;
}

std::pair<CVec3, CVec3> translated_basis(ModeIndex idx, const Vec3& z, double k,
                                         const Vec3& direction) {
  const auto [theta, phi] = spherical_angles(direction);
  auto [U, V] = vsh_pair(idx, theta, phi);
  const Complex phase = std::polar(1.0, -k * z.dot(direction));
  return {phase * U, phase * V};
}

Complex inner_product(const TangentialField& f, const TangentialField& g) {
  if (!f.rule || !g.rule || !f.rule->same_rule(*g.rule)) {
    throw RuleMismatch("inner product of fields sampled on different rules");
  }
  quad::CompensatedSum sum;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    sum.add(f.rule->weight(i) * std::conj(f.values[i].dot(g.values[i])));
  }
  return sum.value();
}

TangentialField sample(const QuadraturePtr& rule, const std::function<CVec3(const Vec3&)>& fn) {
  TangentialField out{rule, {}};
  out.values.reserve(rule->size());
  for (const Vec3& d : rule->directions()) out.values.push_back(fn(d));
  return out;
}

int required_n_theta(int order, double k, double z_norm) {
  return order + static_cast<int>(std::ceil(k * z_norm)) + 10;
}

TangentialCoeffs analyze(const TangentialField& f, const Vec3& z, double k, int order) {
  if (order < 1) throw DomainError("analysis order must be >= 1");
  const SphereQuadrature& rule = *f.rule;
  const int need = required_n_theta(order, k, z.norm());
  if (rule.n_theta() < need || rule.n_phi() < 2 * order + 1) {
    throw DegreeTooLow("rule with n_theta = " + std::to_string(rule.n_theta()) +
                       " cannot resolve order " + std::to_string(order) + " (need n_theta >= " +
                       std::to_string(need) + ")");
  }
  TangentialCoeffs out(z, k, order);
  const int n_phi = rule.n_phi();
  const double dphi = 2.0 * kPi / n_phi;

  // e^{-i m phi_j} for m = 0..order.
  std::vector<Complex> twiddle(static_cast<std::size_t>(order + 1) * n_phi);
  for (int m = 0; m <= order; ++m) {
    for (int j = 0; j < n_phi; ++j) twiddle[m * n_phi + j] = std::polar(1.0, -m * rule.phi(j));
  }

  std::vector<Complex> g_th(n_phi), g_ph(n_phi);
  std::vector<Complex> F_th(2 * order + 1), F_ph(2 * order + 1);
  for (int i = 0; i < rule.n_theta(); ++i) {
    const double theta = rule.theta(i);
    for (int j = 0; j < n_phi; ++j) {
      const std::size_t node = static_cast<std::size_t>(i) * n_phi + j;
      const Vec3& d = rule.direction(node);
      const Complex phase = std::polar(1.0, k * z.dot(d));
      const CVec3 g = phase * f.values[node];
      g_th[j] = theta_hat(theta, rule.phi(j)).cast<Complex>().dot(g);
      g_ph[j] = phi_hat(rule.phi(j)).cast<Complex>().dot(g);
    }
    for (int m = -order; m <= order; ++m) {
      Complex a_th{}, a_ph{};
      const int am = std::abs(m);
      for (int j = 0; j < n_phi; ++j) {
        const Complex tw = m >= 0 ? twiddle[am * n_phi + j] : std::conj(twiddle[am * n_phi + j]);
        a_th += g_th[j] * tw;
        a_ph += g_ph[j] * tw;
      }
      F_th[m + order] = a_th * dphi;
      F_ph[m + order] = a_ph * dphi;
    }
    const specfun::LegendreTable table(order, theta);
    const double w = rule.ring_weight(i);
    for (int n = 1; n <= order; ++n) {
      const double norm = w / std::sqrt(n * (n + 1.0));
      for (int m = -n; m <= n; ++m) {
        const auto [p, dp, mps] = signed_legendre(table, n, m);
        const Complex Ft = F_th[m + order], Fp = F_ph[m + order];
        out.u(n, m) += norm * (dp * Ft - kI * mps * Fp);
        out.v(n, m) += norm * (kI * mps * Ft + dp * Fp);
        (void)p;
      }
    }
  }
  return out;
}

TangentialField synthesize(const TangentialCoeffs& c, const QuadraturePtr& rule_ptr) {
  const SphereQuadrature& rule = *rule_ptr;
  const int order = c.order;
  const int n_phi = rule.n_phi();
  TangentialField out{rule_ptr, std::vector<CVec3>(rule.size(), CVec3::Zero())};
  std::vector<Complex> G_th(2 * order + 1), G_ph(2 * order + 1);
  for (int i = 0; i < rule.n_theta(); ++i) {
    const double theta = rule.theta(i);
    const specfun::LegendreTable table(std::max(order, 1), theta);
    std::fill(G_th.begin(), G_th.end(), Complex{});
    std::fill(G_ph.begin(), G_ph.end(), Complex{});
    for (int n = 1; n <= order; ++n) {
      const double norm = 1.0 / std::sqrt(n * (n + 1.0));
      for (int m = -n; m <= n; ++m) {
        const auto [p, dp, mps] = signed_legendre(table, n, m);
        const Complex a = c.u(n, m), b = c.v(n, m);
        G_th[m + order] += norm * (a * dp - kI * b * mps);
        G_ph[m + order] += norm * (kI * a * mps + b * dp);
        (void)p;
      }
    }
    for (int j = 0; j < n_phi; ++j) {
      const double ph = rule.phi(j);
      Complex f_th{}, f_ph{};
      for (int m = -order; m <= order; ++m) {
        const Complex e = std::polar(1.0, m * ph);
        f_th += G_th[m + order] * e;
        f_ph += G_ph[m + order] * e;
      }
      const std::size_t node = static_cast<std::size_t>(i) * n_phi + j;
      const Vec3& d = rule.direction(node);
      const Complex phase = std::polar(1.0, -c.k * c.center.dot(d));
      out.values[node] =
          phase * (f_th * theta_hat(theta, ph).cast<Complex>() + f_ph * phi_hat(ph).cast<Complex>());
    }
  }
  return out;
}

}  // namespace polyscat::harmonics
