#include "polyscat/indicator.hpp"

#include <algorithm>
#include <cmath>

#include "polyscat/errors.hpp"
#include "polyscat/specfun.hpp"

namespace polyscat::indicator {

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Bounded:
      return "bounded";
    case Classification::Divergent:
      return "divergent";
    case Classification::Undetermined:
      break;
  }
  return "undetermined";
}

void TruncationPolicy::validate() const {
  if (N_max < 1 || N_max > specfun::kMaxOrder) throw DomainError("N_max out of range");
  if (window < 2 || window >= N_max) throw DomainError("window must satisfy 2 <= window < N_max");
  if (!(noise_floor >= 0.0)) throw DomainError("noise_floor must be >= 0");
  if (!(growth_threshold > 0.0)) throw DomainError("growth_threshold must be positive");
}

IndicatorCurve indicator_from_coeffs(const harmonics::TangentialCoeffs& coeffs, const mie::TestBall& ball,
                                     const mie::BallSpectrum& spectrum, const TruncationPolicy& policy) {
  policy.validate();
  if ((coeffs.center - ball.z).norm() > 1e-12) throw DomainError("coefficients analysed at another center");
  if (std::abs(coeffs.k - spectrum.k) > 1e-12 * spectrum.k) throw DomainError("wavenumber mismatch");
  const int N = std::min({policy.N_max, spectrum.order, coeffs.order});
  IndicatorCurve curve;
  curve.ball = ball;
  curve.partials.assign(N + 1, 0.0);
  double sum = 0.0;
  for (int n = 1; n <= N; ++n) {
    double su = 0.0, sv = 0.0;
    for (int m = -n; m <= n; ++m) {
      su += std::norm(coeffs.u(n, m));
      sv += std::norm(coeffs.v(n, m));
    }
    sum += (su / std::abs(spectrum.u(n)) + sv / std::abs(spectrum.v(n))) / (4.0 * kPi);
    curve.partials[n] = sum;
  }
  if (N >= 1) {
    const double eps2 = policy.noise_floor * policy.noise_floor;
    curve.noise_increment =
        eps2 * (2.0 * N + 1.0) * (1.0 / std::abs(spectrum.u(N)) + 1.0 / std::abs(spectrum.v(N))) / (4.0 * kPi);
  }
  classify(curve, policy);
  return curve;
}

IndicatorCurve indicator_partials(const harmonics::TangentialField& w, const mie::TestBall& ball,
                                  const mie::BallSpectrum& spectrum, const TruncationPolicy& policy) {
  policy.validate();
  const int N = std::min(policy.N_max, spectrum.order);
  const auto coeffs = harmonics::analyze(w, ball.z, spectrum.k, N);
  return indicator_from_coeffs(coeffs, ball, spectrum, policy);
}

Classification classify(IndicatorCurve& curve, const TruncationPolicy& policy) {
  const int N = curve.order();
  const double tau = policy.growth_threshold;
  curve.slope = 0.0;
  if (N < 1 || curve.partials[N] <= 0.0) {
    curve.classification = Classification::Bounded;
    return curve.classification;
  }
  const int window = std::max(2, std::min(policy.window, N / 2));
  if (N < 2) {
    curve.classification = Classification::Undetermined;
    return curve.classification;
  }
  // Partials are non-decreasing; leading zeros only occur for exactly
  // vanishing low modes, which the log cannot see.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (int n = N - window + 1; n <= N; ++n) {
    if (curve.partials[n] <= 0.0) continue;
    const double y = std::log(curve.partials[n]);
    sx += n;
    sy += y;
    sxx += double(n) * n;
    sxy += n * y;
    ++count;
  }
  if (count >= 2) curve.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  const double increment = curve.partials[N] - curve.partials[N - 1];
  const double floor = std::max(0.25 * tau * curve.partials[N], 4.0 * curve.noise_increment);
  if (curve.slope > tau) {
    curve.classification = Classification::Divergent;
  } else if (curve.slope < 0.25 * tau && increment <= floor) {
    curve.classification = Classification::Bounded;
  } else {
    curve.classification = Classification::Undetermined;
  }
  return curve.classification;
}

int select_truncation(double k, double h, double noise_delta, const mie::BallSpectrum& spectrum,
                      const TruncationPolicy& policy) {
  if (!(noise_delta >= 0.0)) throw DomainError("noise_delta must be >= 0");
  if (std::abs(spectrum.k - k) > 1e-12 * k || std::abs(spectrum.h - h) > 1e-12 * h) {
    throw DomainError("spectrum does not match (k, h)");
  }
  const int cap = std::min(policy.N_max, spectrum.order);
  const double cut = noise_delta * noise_delta;
  for (int n = cap; n >= 1; --n) {
    if (std::min(std::abs(spectrum.u(n)), std::abs(spectrum.v(n))) > cut) return n;
  }
  return 1;
}

}  // namespace polyscat::indicator
