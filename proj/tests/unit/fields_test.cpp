#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "../support/fd.hpp"
#include "polyscat/errors.hpp"
#include "polyscat/fields.hpp"

using namespace polyscat;
using namespace polyscat::fields;
using polyscat::testing::fd_curl;
using polyscat::testing::fd_div;
using polyscat::testing::fd_jacobian;

namespace {

Vec3 random_point(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

// Scaled Maxwell residuals of a field at x.
double maxwell_residual(const FieldFn& f, const Vec3& x, double k, double h) {
  auto E = [&](const Vec3& p) { return f.E(p); };
  auto H = [&](const Vec3& p) { return f.H(p); };
  const FieldValue v = f(x);
  const double scale = std::max({v.E.norm(), v.H.norm(), 1e-300});
  const double r1 = (fd_curl(E, x, h) - kI * k * v.H).norm();
  const double r2 = (fd_curl(H, x, h) + kI * k * v.E).norm();
  const double r3 = std::abs(fd_div(E, x, h)) + std::abs(fd_div(H, x, h));
  return std::max({r1, r2, r3}) / (k * scale);
}

}  // namespace

TEST(PlaneWave, ValueAtOrigin) {
  const auto f = plane_wave({Vec3::UnitZ(), Vec3::UnitX()}, 2.0);
  EXPECT_LT((f.E(Vec3::Zero()) - CVec3(1, 0, 0)).norm(), 1e-15);
  EXPECT_LT((f.H(Vec3::Zero()) - CVec3(0, 1, 0)).norm(), 1e-15);
}

TEST(PlaneWave, MaxwellAndJacobian) {
  std::mt19937_64 rng(1);
  const Vec3 d = Vec3(1, -2, 0.5).normalized();
  const Vec3 p = d.unitOrthogonal();
  const auto f = plane_wave({d, p}, 1.7);
  for (int i = 0; i < 10; ++i) {
    const Vec3 x = random_point(rng, 3.0);
    EXPECT_LT(maxwell_residual(f, x, 1.7, 1e-3), 1e-8);
    const CMat3 J = fd_jacobian([&](const Vec3& y) { return f.E(y); }, x, 1e-3);
    EXPECT_LT((J - f.jacobian_E(x)).norm(), 1e-8);
  }
  EXPECT_THROW(plane_wave({d, d}, 1.0), InvalidPolarization);
}

TEST(Section5PlaneWave, NormalizationAndParallelPolarization) {
  const double k = 1.3;
  const auto f = section5_plane_wave({Vec3::UnitZ(), Vec3::UnitX()}, k);
  EXPECT_LT((f.E(Vec3::Zero()) - kI * k * CVec3(1, 0, 0)).norm(), 1e-15);
  const auto z = section5_plane_wave({Vec3::UnitZ(), Vec3(0, 0, 2)}, k);
  EXPECT_LT(z.E(Vec3(0.3, 0.1, 0.2)).norm(), 1e-15);
  const Vec3 d = Vec3(0.2, 0.3, -0.9).normalized();
  const Vec3 p = d.unitOrthogonal();
  const auto a = section5_plane_wave({d, p}, k);
  const auto b = plane_wave({d, p}, k);
  const Vec3 x(0.4, -1.1, 0.7);
  EXPECT_LT((a.E(x) - kI * k * b.E(x)).norm(), 1e-14);
  EXPECT_LT(maxwell_residual(a, x, k, 1e-3), 1e-8);
}

TEST(MagneticDipole, MaxwellResidualAndSingularity) {
  std::mt19937_64 rng(2);
  const Vec3 y(0.1, -0.2, 0.3), a(0.3, 1.0, -0.5);
  const double k = 2.0;
  const auto f = magnetic_dipole(y, a, k);
  for (int i = 0; i < 10; ++i) {
    Vec3 x = random_point(rng, 3.0);
    if ((x - y).norm() < 0.5) x += Vec3(1, 1, 1);
    EXPECT_LT(maxwell_residual(f, x, k, 1e-3), 1e-7);
    const CMat3 J = fd_jacobian([&](const Vec3& p) { return f.E(p); }, x, 1e-3);
    EXPECT_LT((J - f.jacobian_E(x)).norm() / J.norm(), 1e-8);
  }
  // |E| ~ |x - y|^{-2} near the source.
  const Vec3 ray = Vec3(1, 2, 2).normalized();
  std::vector<double> lx, ly;
  for (double r = 1e-5; r < 1e-3; r *= 1.5) {
    lx.push_back(std::log(r));
    ly.push_back(std::log(f.E(y + r * ray).norm()));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
  mx /= lx.size();
  my /= ly.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) sxy += (lx[i] - mx) * (ly[i] - my), sxx += (lx[i] - mx) * (lx[i] - mx);
  EXPECT_NEAR(sxy / sxx, -2.0, 0.1);
  // Radiating: |E| |x| stays bounded.
  const double far1 = f.E(y + 1e3 * ray).norm() * 1e3;
  const double far2 = f.E(y + 1e5 * ray).norm() * 1e5;
  EXPECT_NEAR(far1 / far2, 1.0, 1e-2);
  EXPECT_THROW(f.E(y), EvalAtSource);
}

TEST(MagneticDipole, SilverMueller) {
  const double k = 1.0;
  const auto f = magnetic_dipole(Vec3::Zero(), Vec3(0.2, -0.4, 1.0), k);
  const Vec3 xhat = Vec3(0.3, 0.5, -0.8).normalized();
  const double r = 50 * 2 * kPi / k;
  const FieldValue v = f(r * xhat);
  const double res = (cross(v.H, xhat.cast<Complex>()) - v.E).norm() * r;
  EXPECT_LT(res, 1e-2 * v.E.norm() * r);
}

TEST(ElectricDipole, JacobianAndMaxwell) {
  std::mt19937_64 rng(4);
  const Vec3 y(0.2, 0.2, -0.1);
  const CVec3 a(Complex(0.3, 0.1), Complex(-1.0, 0.2), Complex(0.5, 0.0));
  const double k = 1.4;
  const auto f = electric_dipole(y, a, k);
  for (int i = 0; i < 10; ++i) {
    Vec3 x = random_point(rng, 2.0);
    if ((x - y).norm() < 0.5) x += Vec3(1, -1, 1);
    EXPECT_LT(maxwell_residual(f, x, k, 1e-3), 1e-7);
    const CMat3 J = fd_jacobian([&](const Vec3& p) { return f.E(p); }, x, 1e-3);
    EXPECT_LT((J - f.jacobian_E(x)).norm() / J.norm(), 1e-8);
  }
}

TEST(Herglotz, ZeroKernelAndSum) {
  const auto rule = harmonics::make_rule(12);
  const auto zero = harmonics::sample(rule, [](const Vec3&) { return CVec3::Zero(); });
  EXPECT_EQ(herglotz(zero, 1.0).E(Vec3(1, 2, 3)).norm(), 0.0);
  const auto kernel = harmonics::sample(rule, [](const Vec3& d) { return harmonics::vsh_V({1, 0}, d); });
  CVec3 sum = CVec3::Zero();
  for (std::size_t i = 0; i < rule->size(); ++i) sum += rule->weight(i) * kernel.values[i];
  const auto f = herglotz(kernel, 2.0);
  EXPECT_LT((f.E(Vec3::Zero()) - sum).norm(), 1e-14);
  EXPECT_LT(maxwell_residual(f, Vec3(0.3, -0.2, 0.5), 2.0, 1e-3), 1e-7);
}

TEST(GreenTensor, SymmetryResidualDecay) {
  const double k = 1.1;
  const Vec3 y(0.3, 0.1, -0.2), x(1.0, -0.5, 0.9);
  const CMat3 G = green_tensor(x, y, k);
  EXPECT_LT((G - G.transpose()).norm(), 1e-15);
  const CVec3 a(1.0, Complex(0, 0.5), -0.3);
  auto Ga = [&](const Vec3& p) -> CVec3 { return green_tensor(p, y, k) * a; };
  auto curl_Ga = [&](const Vec3& p) { return fd_curl(Ga, p, 1e-3); };
  const CVec3 res = fd_curl(curl_Ga, x, 1e-3) - k * k * Ga(x);
  EXPECT_LT(res.norm() / (k * k * Ga(x).norm()), 1e-6);
  // Slope -1 decay for k|x - y| >> 1.
  const Vec3 ray = Vec3(0.6, 0.0, 0.8);
  std::vector<double> lr, lg;
  for (double r = 100; r < 1e4; r *= 1.3) {
    lr.push_back(std::log(r));
    lg.push_back(std::log(green_tensor(y + r * ray, y, k).norm()));
  }
  const double slope = (lg.back() - lg.front()) / (lr.back() - lr.front());
  EXPECT_NEAR(slope, -1.0, 0.05);
  EXPECT_THROW(green_tensor(y, y, k), EvalAtSource);
}

TEST(Multipole, TangentialMaxwellAndFarField) {
  const double k = 1.5;
  const harmonics::ModeIndex idx{2, -1};
  const Vec3 x(0.7, -0.4, 0.9);
  const auto mp = multipole_q(idx, k, x);
  EXPECT_LT(std::abs(mp.q.dot(x.normalized().cast<Complex>())), 1e-14);
  auto q = [&](const Vec3& p) { return multipole_q(idx, k, p).q; };
  auto cq = [&](const Vec3& p) { return multipole_q(idx, k, p).curl_q; };
  EXPECT_LT((fd_curl(q, x, 1e-3) - mp.curl_q).norm() / mp.curl_q.norm(), 1e-8);
  // curl curl q = k^2 q.
  EXPECT_LT((fd_curl(cq, x, 1e-3) - k * k * mp.q).norm() / (k * k * mp.q.norm()), 1e-7);
  // Far field: q ~ e^{ikr}/r * (-(-i)^{n+1} sqrt(n(n+1)) / k) V_n^m.
  const Vec3 xhat = Vec3(0.2, 0.4, -0.7).normalized();
  const harmonics::ModeIndex i10{1, 0};
  const double r = 1e7;
  const CVec3 qr = multipole_q(i10, k, r * xhat).q * r * std::polar(1.0, -k * r);
  const CVec3 expect = -std::pow(-kI, 2) * std::sqrt(2.0) / k * harmonics::vsh_V(i10, xhat);
  EXPECT_LT((qr - expect).norm(), 1e-6 * expect.norm());
  EXPECT_THROW(multipole_q(idx, k, Vec3::Zero()), EvalAtSource);
}
