#include <cmath>

#include <gtest/gtest.h>

#include "polyscat/errors.hpp"
#include "polyscat/indicator.hpp"
#include "polyscat/specfun.hpp"

using namespace polyscat;
using namespace polyscat::indicator;
using harmonics::make_rule;

namespace {

const fields::PlaneWaveParams kIncident{Vec3::UnitZ(), Vec3::UnitX()};

// Truncation for exact (double precision) data.
IndicatorCurve curve_for(const harmonics::TangentialField& w, double k, const Vec3& z, double h,
                         double delta = 1e-13) {
  TruncationPolicy policy;
  const auto spectrum = mie::pec_ball_spectrum(k, h, policy.N_max);
  policy.N_max = select_truncation(k, h, delta, spectrum, policy);
  policy.window = std::min(policy.window, policy.N_max - 1);
  return indicator_partials(w, {z, h}, spectrum, policy);
}

}  // namespace

TEST(Indicator, ZeroFieldIsBounded) {
  const auto rule = make_rule(60);
  const harmonics::TangentialField w{rule, std::vector<CVec3>(rule->size(), CVec3::Zero())};
  const auto spectrum = mie::pec_ball_spectrum(1.0, 1.0, 40);
  const auto c = indicator_partials(w, {Vec3(2, 0, 0), 1.0}, spectrum, TruncationPolicy{});
  for (double p : c.partials) EXPECT_EQ(p, 0.0);
  EXPECT_EQ(c.classification, Classification::Bounded);
}

TEST(Indicator, BallTargetDichotomy) {
  const double k = 1.0;
  const auto rule = make_rule(60);
  const auto w = mie::far_field_pec_ball({Vec3::Zero(), 0.5}, kIncident, k, rule);
  const auto inside = curve_for(w, k, Vec3(2, 0, 0), 3.0);
  EXPECT_EQ(inside.classification, Classification::Bounded);
  const int N = inside.order();
  EXPECT_NEAR(inside.partials[N] / inside.partials[N - 8], 1.0, 5e-3);
  const auto outside = curve_for(w, k, Vec3(2, 0, 0), 1.0);
  EXPECT_EQ(outside.classification, Classification::Divergent);
  EXPECT_GT(outside.slope, 1.0);
  for (const auto* c : {&inside, &outside}) {
    for (int n = 1; n <= c->order(); ++n) EXPECT_GE(c->partials[n], c->partials[n - 1]);
  }
}

TEST(Indicator, TranslationCovariance) {
  const double k = 1.3;
  const Vec3 s(0.4, -0.3, 0.2);
  const auto rule = make_rule(64);
  const auto w0 = mie::far_field_pec_ball({Vec3(0.1, 0, 0), 0.4}, kIncident, k, rule);
  const auto w1 = mie::far_field_pec_ball({Vec3(0.1, 0, 0) + s, 0.4}, kIncident, k, rule);
  const Vec3 z(1.5, 0.5, -0.5);
  for (double h : {1.2, 2.5}) {
    // Cut well above roundoff so the comparison sees the data, not noise.
    const auto a = curve_for(w0, k, z, h, 1e-10);
    const auto b = curve_for(w1, k, z + s, h, 1e-10);
    ASSERT_EQ(a.order(), b.order());
    for (int n = 1; n <= a.order(); ++n) EXPECT_NEAR(a.partials[n], b.partials[n], 1e-9 * a.partials[n]);
  }
}

TEST(Indicator, CoarseRuleIsRejected) {
  const auto rule = make_rule(20);
  const auto w = mie::far_field_pec_ball({Vec3::Zero(), 0.5}, kIncident, 1.0, rule);
  EXPECT_THROW(indicator_partials(w, {Vec3(2, 0, 0), 1.0}, mie::pec_ball_spectrum(1.0, 1.0, 40), TruncationPolicy{}),
               DegreeTooLow);
}

TEST(Classify, SyntheticCurves) {
  TruncationPolicy policy;
  IndicatorCurve flat;
  flat.partials.assign(21, 5.0);
  flat.partials[0] = 0.0;
  EXPECT_EQ(classify(flat, policy), Classification::Bounded);
  IndicatorCurve grows;
  grows.partials.resize(21);
  for (int n = 0; n <= 20; ++n) grows.partials[n] = std::exp(double(n));
  EXPECT_EQ(classify(grows, policy), Classification::Divergent);
  EXPECT_NEAR(grows.slope, 1.0, 1e-12);
  // Slow growth between tau/4 and tau is left open.
  IndicatorCurve slow;
  slow.partials.resize(21);
  for (int n = 0; n <= 20; ++n) slow.partials[n] = std::exp(0.05 * n);
  EXPECT_EQ(classify(slow, policy), Classification::Undetermined);
}

TEST(SelectTruncation, CutoffAndMonotonicity) {
  TruncationPolicy policy;
  const auto spectrum = mie::pec_ball_spectrum(1.0, 1.0, 40);
  EXPECT_EQ(select_truncation(1.0, 1.0, 0.0, spectrum, policy), 40);
  // Scan of the spectrum at kh = 1.
  int expected = 1;
  for (int n = 1; n <= 40; ++n) {
    if (std::min(std::abs(spectrum.u(n)), std::abs(spectrum.v(n))) > 1e-6) expected = n;
  }
  EXPECT_EQ(select_truncation(1.0, 1.0, 1e-3, spectrum, policy), expected);
  EXPECT_LT(expected, 10);
  int prev = 41;
  for (double delta : {0.0, 1e-12, 1e-8, 1e-5, 1e-3, 1e-1}) {
    const int n = select_truncation(1.0, 1.0, delta, spectrum, policy);
    EXPECT_LE(n, prev);
    prev = n;
  }
  EXPECT_THROW(select_truncation(1.0, 2.0, 0.0, spectrum, policy), DomainError);
}

TEST(TruncationPolicy, Validation) {
  TruncationPolicy p;
  p.window = 40;
  EXPECT_THROW(p.validate(), DomainError);
  p = TruncationPolicy{};
  p.N_max = specfun::kMaxOrder + 1;
  EXPECT_THROW(p.validate(), DomainError);
}
