#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace polyscat {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using CMat3 = Eigen::Matrix3cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// a x b without conjugation. Eigen's own cross() conjugates complex
/// results, which is never what a field computation wants.
template <typename A, typename B>
auto cross(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  using S = decltype(a(0) * b(0));
  return Eigen::Matrix<S, 3, 1>(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2),
                                a(0) * b(1) - a(1) * b(0));
}

/// Electric and magnetic field at one point.
struct FieldValue {
  CVec3 E = CVec3::Zero();
  CVec3 H = CVec3::Zero();
};

}  // namespace polyscat
