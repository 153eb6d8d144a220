#pragma once

#include <vector>

#include "polyscat/types.hpp"

/// Spherical Bessel/Hankel functions, Riccati-Bessel functions and fully
/// normalized associated Legendre functions for real positive arguments.
namespace polyscat::specfun {

/// Largest order any routine in this namespace accepts.
inline constexpr int kMaxOrder = 120;

/// psi_n(t) = t j_n(t) and zeta_n(t) = t h_n^(1)(t) with t-derivatives.
/// psi * zeta' - psi' * zeta == i for every n and t.
struct RiccatiPair {
  double psi = 0.0;
  double psi_prime = 0.0;
  Complex zeta{};
  Complex zeta_prime{};
};

double sph_bessel_j(int n, double t);
double sph_bessel_y(int n, double t);
Complex sph_hankel1(int n, double t);
double sph_bessel_j_prime(int n, double t);
double sph_bessel_y_prime(int n, double t);
RiccatiPair riccati(int n, double t);

/// j_0(t) .. j_{n_max}(t) from one normalized Miller (backward) recurrence.
std::vector<double> sph_bessel_j_table(int n_max, double t);
/// y_0(t) .. y_{n_max}(t) by upward recurrence; throws NumericalOverflow
/// when y_{n_max}(t) is not representable.
std::vector<double> sph_bessel_y_table(int n_max, double t);
/// Riccati pairs for orders 0 .. n_max.
std::vector<RiccatiPair> riccati_table(int n_max, double t);

/// Fully normalized P_n^m(x) with the Condon-Shortley phase, so that
/// Y_n^m(theta, phi) = P_n^m(cos theta) e^{i m phi} is orthonormal on S^2.
/// Negative m follows P_n^{-m} = (-1)^m P_n^m.
double assoc_legendre_normalized(int n, int m, double x);

/// Normalized Legendre values at one colatitude together with the two
/// derivative combinations needed for surface gradients. Only m >= 0 is
/// stored; index with `at(n, m)`.
class LegendreTable {
 public:
  LegendreTable(int n_max, double theta);

  int n_max() const { return n_max_; }
  /// P_n^m(cos theta).
  double p(int n, int m) const { return p_[index(n, m)]; }
  /// d/dtheta P_n^m(cos theta).
  double dp_dtheta(int n, int m) const { return dp_[index(n, m)]; }
  /// m P_n^m(cos theta) / sin(theta), finite at the poles.
  double m_p_over_sin(int n, int m) const { return mps_[index(n, m)]; }

  static std::size_t index(int n, int m) {
    return static_cast<std::size_t>(n) * (n + 1) / 2 + m;
  }

 private:
  int n_max_;
  std::vector<double> p_, dp_, mps_;
};

}  // namespace polyscat::specfun
