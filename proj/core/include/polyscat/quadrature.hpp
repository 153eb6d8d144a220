#pragma once

#include <functional>
#include <vector>

#include "polyscat/types.hpp"

namespace polyscat::quad {

struct GaussLegendre {
  std::vector<double> nodes;    // ascending in (-1, 1)
  std::vector<double> weights;  // sum to 2
};

/// n-point Gauss-Legendre rule on [-1, 1], exact for polynomials of degree 2n-1.
GaussLegendre gauss_legendre(int n);

struct AdaptiveOptions {
  double abs_tol = 1e-11;
  double rel_tol = 0.0;
  int max_subdivisions = 200;
  /// Multiplies the roundoff floor (200 eps times the integral of |f|).
  /// Integrands whose phase is computed from a large argument carry
  /// relative noise of about eps times that argument.
  double noise_scale = 1.0;
};

struct AdaptiveResult {
  Complex value{};
  double error_estimate = 0.0;
  int evaluations = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration of a complex
/// integrand over [a, b]. Throws QuadratureFailure when the error estimate
/// cannot be pushed below the tolerance within max_subdivisions.
AdaptiveResult integrate(const std::function<Complex(double)>& f, double a, double b,
                         const AdaptiveOptions& opts = {});

/// Same, for an integrand returning several components that share the same
/// subdivision (all components must meet the tolerance).
struct AdaptiveVectorResult {
  std::vector<Complex> value;
  double error_estimate = 0.0;
  int evaluations = 0;
};
AdaptiveVectorResult integrate_vector(const std::function<void(double, std::vector<Complex>&)>& f,
                                      std::size_t components, double a, double b,
                                      const AdaptiveOptions& opts = {});

/// Neumaier-compensated complex accumulator.
class CompensatedSum {
 public:
  void add(Complex v) {
    add_real(sum_re_, c_re_, v.real());
    add_real(sum_im_, c_im_, v.imag());
  }
  Complex value() const { return {sum_re_ + c_re_, sum_im_ + c_im_}; }

 private:
  static void add_real(double& sum, double& comp, double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  double sum_re_ = 0.0, c_re_ = 0.0, sum_im_ = 0.0, c_im_ = 0.0;
};

}  // namespace polyscat::quad
