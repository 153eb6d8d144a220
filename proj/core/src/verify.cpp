#include "polyscat/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace polyscat::verify {
namespace {

using reflect::mirror;
using VecField = std::function<CVec3(const Vec3&)>;

reflect::PlaneOracle random_oracle(double k, double lambda, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 d(g(rng), g(rng), -std::abs(g(rng)) - 0.2);
  d.normalize();
  const Vec3 a = d.unitOrthogonal(), b = cross(d, a);
  const CVec3 p = Complex(g(rng), g(rng)) * a.cast<Complex>() + Complex(g(rng), g(rng)) * b.cast<Complex>();
  return reflect::impedance_plane_oracle(d, p, k, lambda);
}

// One-sided 4th-order d/dx3 from above (dir = +1) or below (dir = -1).
CVec3 one_sided_d3(const VecField& f, const Vec3& x0, double h, double dir) {
  const Vec3 e = dir * h * Vec3::UnitZ();
  return dir * (-25.0 * f(x0) + 48.0 * f(x0 + e) - 36.0 * f(x0 + 2 * e) + 16.0 * f(x0 + 3 * e) - 3.0 * f(x0 + 4 * e)) /
         (12.0 * h);
}

CMat3 fd_jacobian(const VecField& f, const Vec3& x, double h) {
  CMat3 J;
  for (int j = 0; j < 3; ++j) {
    Vec3 e = Vec3::Zero();
    e[j] = h;
    J.col(j) = (-f(x + 2 * e) + 8.0 * f(x + e) - 8.0 * f(x - e) + f(x - 2 * e)) / (12.0 * h);
  }
  return J;
}

CVec3 fd_laplacian(const VecField& f, const Vec3& x, double h) {
  CVec3 out = CVec3::Zero();
  const CVec3 c = f(x);
  for (int j = 0; j < 3; ++j) {
    Vec3 e = Vec3::Zero();
    e[j] = h;
    out += (-f(x + 2 * e) + 16.0 * f(x + e) - 30.0 * c + 16.0 * f(x - e) - f(x - 2 * e)) / (12.0 * h * h);
  }
  return out;
}

}  // namespace

OracleSuiteReport reflection_oracle_suite(const OracleSuiteOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> Uk(0.5, 3.0), Ul(0.3, 3.0), U(-1.0, 1.0);
  OracleSuiteReport rep;
  const bool fixed = opts.k > 0.0 && opts.lambda > 0.0;
  const int L = std::max(2, opts.lattice);
  for (int f = 0; f < opts.fields; ++f) {
    double k = opts.k, lambda = opts.lambda;
    if (!fixed) {
      do {
        k = Uk(rng);
        lambda = Ul(rng);
      } while (std::abs(k - lambda) <= 0.1);
    }
    const auto o = random_oracle(k, lambda, rng);
    rep.max_bc_residual = std::max(rep.max_bc_residual, o.bc_residual);
    auto ext = [&](const Vec3& x) { return reflect::maxwell_extend(o.field, k, lambda, x); };
    auto exact = [&](const Vec3& x) { return CVec3(o.field.E(x)); };

    double err = 0.0, scale = 0.0;
    for (int a = 0; a < L; ++a)
      for (int b = 0; b < L; ++b)
        for (int c = 0; c < L; ++c) {
          const Vec3 x(-1.0 + 2.0 * a / (L - 1), -1.0 + 2.0 * b / (L - 1), -1.0 + 0.95 * c / (L - 1));
          const CVec3 e = exact(x);
          err = std::max(err, (ext(x) - e).norm());
          scale = std::max(scale, e.norm());
          ++rep.points;
        }
    rep.max_error = std::max(rep.max_error, err / scale);

    const double h = 1e-3 / std::max(1.0, std::max(k, lambda));
    for (int j = 0; j < opts.jump_points; ++j) {
      const Vec3 x0(U(rng), U(rng), 0.0);
      const double s = exact(x0).norm();
      rep.max_value_jump = std::max(rep.max_value_jump, (ext(x0 - 1e-14 * Vec3::UnitZ()) - exact(x0)).norm() / s);
      const CVec3 below = one_sided_d3(ext, x0 - 1e-14 * Vec3::UnitZ(), h, -1.0);
      const CVec3 above = one_sided_d3(exact, x0, h, 1.0);
      rep.max_normal_jump = std::max(rep.max_normal_jump, (below - above).norm() / (k * s));
    }

    const Vec3 lo(-1, -1, -1), hi(1, 1, -0.2);
    const unsigned fd_seed = static_cast<unsigned>(opts.seed * 7919 + f);
    const auto r = reflect::extension_residual_check(ext, k, lo, hi, opts.fd_points, fd_seed);
    const auto r0 = reflect::extension_residual_check(exact, k, lo, hi, opts.fd_points, fd_seed);
    rep.helmholtz = std::max(rep.helmholtz, r.helmholtz);
    rep.divergence = std::max(rep.divergence, r.divergence);
    rep.helmholtz_floor = std::max(rep.helmholtz_floor, r0.helmholtz);
    rep.divergence_floor = std::max(rep.divergence_floor, r0.divergence);
    ++rep.fields;
  }
  return rep;
}

SlopeReport dirichlet_limit(double k, const std::vector<double>& lambdas, std::uint64_t seed) {
  SlopeReport rep;
  const Vec3 pts[] = {Vec3(0.1, 0.2, 0.3), Vec3(-0.4, 0.1, 0.15), Vec3(0.2, -0.3, 0.5)};
  for (double lambda : lambdas) {
    std::mt19937_64 rng(seed);
    const auto o = random_oracle(k, lambda, rng);
    double worst = 0.0;
    for (const Vec3& y : pts) {
      const CVec3 De = reflect::apply_D(o.field, k, lambda, y);
      const CVec3 E = o.field.E(y);
      worst = std::max(worst, (De - CVec3(-E[0], -E[1], E[2])).norm());
    }
    rep.lambdas.push_back(lambda);
    rep.errors.push_back(worst);
  }
  const int n = static_cast<int>(rep.lambdas.size());
  if (n >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
      const double x = std::log(rep.lambdas[i]), y = std::log(rep.errors[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    rep.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return rep;
}

GreenReport green_check(double k, double lambda, int n_points, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0), Uz(0.3, 1.0);
  std::normal_distribution<double> g;
  GreenReport rep;
  const double h = 2e-3 / std::max(1.0, std::max(k, lambda));
  const double hf = 5e-3 / std::max(1.0, k);
  for (int i = 0; i < n_points; ++i) {
    const Vec3 y(U(rng), U(rng), Uz(rng));
    const CVec3 a(Complex(g(rng), g(rng)), Complex(g(rng), g(rng)), Complex(g(rng), g(rng)));
    auto Ga = [&](const Vec3& x) -> CVec3 { return reflect::impedance_halfspace_green(x, y, k, lambda) * a; };
    auto G0 = [&](const Vec3& x) -> CVec3 { return fields::green_tensor(x, y, k) * a; };

    const Vec3 base(U(rng), U(rng), 1e-12);
    CMat3 J;
    for (int j = 0; j < 2; ++j) {
      Vec3 e = Vec3::Zero();
      e[j] = h;
      J.col(j) = (-Ga(base + 2 * e) + 8.0 * Ga(base + e) - 8.0 * Ga(base - e) + Ga(base - 2 * e)) / (12.0 * h);
    }
    J.col(2) = one_sided_d3(Ga, base, h, 1.0);
    const CVec3 E = Ga(base);
    rep.max_bc = std::max(rep.max_bc, reflect::impedance_residual(E, J, lambda).norm() / E.norm());
    ++rep.points;

    // Away from the source and the plane, every tenth point (each costs
    // 13 tensor evaluations with nested quadrature).
    if (i % 10 == 0) {
      Vec3 x;
      do x = Vec3(U(rng), U(rng), Uz(rng)); while ((x - y).norm() < 0.3);
      const CVec3 Ex = Ga(x), E0 = G0(x);
      rep.helmholtz = std::max(rep.helmholtz, (fd_laplacian(Ga, x, hf) + k * k * Ex).norm() / (k * k * Ex.norm()));
      rep.divergence = std::max(rep.divergence, std::abs(fd_jacobian(Ga, x, hf).trace()) / (k * Ex.norm()));
      rep.free_space_helmholtz =
          std::max(rep.free_space_helmholtz, (fd_laplacian(G0, x, hf) + k * k * E0).norm() / (k * k * E0.norm()));
    }
  }
  return rep;
}

NormalsReport normals_check(double k, double lambda) {
  NormalsReport rep;
  rep.normals = reflect::admissible_normals(k, lambda);
  for (const Vec3& nu : rep.normals)
    rep.max_residual = std::max(rep.max_residual, reflect::admissible_residual(nu, k, lambda));
  return rep;
}

}  // namespace polyscat::verify
