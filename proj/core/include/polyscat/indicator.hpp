#pragma once

#include <string>
#include <vector>

#include "polyscat/harmonics.hpp"
#include "polyscat/mie.hpp"

/// The test-ball indicator
///
///   I(z, h) = (1/4 pi) sum_{n>=1} sum_m ( |<w, U~_{n,m}^{(z)}>|^2 / |u_n^{(h)}|
///                                      + |<w, V~_{n,m}^{(z)}>|^2 / |v_n^{(h)}| ),
///
/// its partial sums, and a finite-truncation decision between a bounded and
/// a divergent series.
namespace polyscat::indicator {

enum class Classification { Bounded, Divergent, Undetermined };

std::string to_string(Classification c);

struct TruncationPolicy {
  int N_max = 40;
  /// Absolute noise level of a single coefficient <w, U~>, used to tell a
  /// converged tail from noise amplification.
  double noise_floor = 0.0;
  double growth_threshold = 0.1;
  int window = 8;

  /// Throws DomainError on N_max outside [1, kMaxOrder], window < 2 or
  /// window >= N_max.
  void validate() const;
};

struct IndicatorCurve {
  mie::TestBall ball;
  /// partials[N] = I_N for N = 0..order (partials[0] = 0).
  std::vector<double> partials;
  /// Expected contribution of coefficient noise to the increment at `order`.
  double noise_increment = 0.0;
  Classification classification = Classification::Undetermined;
  double slope = 0.0;

  int order() const { return static_cast<int>(partials.size()) - 1; }
};

/// Partial sums up to min(policy.N_max, spectrum.order) and their
/// classification. Throws DegreeTooLow when w's rule cannot resolve the band.
IndicatorCurve indicator_partials(const harmonics::TangentialField& w, const mie::TestBall& ball,
                                  const mie::BallSpectrum& spectrum, const TruncationPolicy& policy);

/// Same from coefficients already analysed at ball.z; lets a sweep over h
/// reuse one analysis per center.
IndicatorCurve indicator_from_coeffs(const harmonics::TangentialCoeffs& coeffs, const mie::TestBall& ball,
                                     const mie::BallSpectrum& spectrum, const TruncationPolicy& policy);

/// Least-squares slope of log I_N over the trailing window (shortened to
/// order/2 for short curves). Divergent if slope > tau; Bounded if slope <
/// tau/4 and the last increment is below max(tau/4 I_N, 4 noise_increment).
Classification classify(IndicatorCurve& curve, const TruncationPolicy& policy);

/// Largest N <= min(policy.N_max, spectrum.order) with
/// min(|u_N|, |v_N|) > noise_delta^2; at least 1.
int select_truncation(double k, double h, double noise_delta, const mie::BallSpectrum& spectrum,
                      const TruncationPolicy& policy);

}  // namespace polyscat::indicator
