#pragma once

// Finite-difference helpers used only by tests.

#include <functional>

#include "polyscat/types.hpp"

namespace polyscat::testing {

using VecField = std::function<CVec3(const Vec3&)>;

/// 4th-order central difference Jacobian, J(i, j) = d_j f_i.
inline CMat3 fd_jacobian(const VecField& f, const Vec3& x, double h) {
  CMat3 J;
  for (int j = 0; j < 3; ++j) {
    Vec3 e = Vec3::Zero();
    e[j] = h;
    J.col(j) = (-f(x + 2 * e) + 8.0 * f(x + e) - 8.0 * f(x - e) + f(x - 2 * e)) / (12.0 * h);
  }
  return J;
}

inline CVec3 curl_from(const CMat3& J) {
  return {J(2, 1) - J(1, 2), J(0, 2) - J(2, 0), J(1, 0) - J(0, 1)};
}

inline CVec3 fd_curl(const VecField& f, const Vec3& x, double h) { return curl_from(fd_jacobian(f, x, h)); }

inline Complex fd_div(const VecField& f, const Vec3& x, double h) { return fd_jacobian(f, x, h).trace(); }

/// Vector Laplacian by the 4th-order 5-point stencil per axis.
inline CVec3 fd_laplacian(const VecField& f, const Vec3& x, double h) {
  CVec3 out = CVec3::Zero();
  const CVec3 c = f(x);
  for (int j = 0; j < 3; ++j) {
    Vec3 e = Vec3::Zero();
    e[j] = h;
    out += (-f(x + 2 * e) + 16.0 * f(x + e) - 30.0 * c + 16.0 * f(x - e) - f(x - 2 * e)) / (12.0 * h * h);
  }
  return out;
}

}  // namespace polyscat::testing
