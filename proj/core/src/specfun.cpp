#include "polyscat/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polyscat/errors.hpp"

namespace polyscat::specfun {
namespace {

void check_order(int n) {
  if (n < 0) throw DomainError("negative order " + std::to_string(n));
  if (n > kMaxOrder) {
    throw OrderCapExceeded("order " + std::to_string(n) + " exceeds cap " +
                           std::to_string(kMaxOrder));
  }
}

void check_argument(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw DomainError("argument must be finite and positive, got " + std::to_string(t));
  }
}

// Index at which the Miller recurrence is seeded. Well above both n and t so
// that the dominant solution y_n has swamped the seed error by n.
int miller_start(int n_max, double t) {
  const double top = std::max<double>(n_max, std::ceil(t));
  const int margin = std::max(20, static_cast<int>(std::ceil(1.5 * t)));
  return static_cast<int>(top) + margin + static_cast<int>(std::ceil(std::sqrt(40.0 * std::max(top, 1.0))));
}

double j0_closed(double t) { return std::sin(t) / t; }

double j1_closed(double t) {
  if (t < 0.25) {
    // Series avoids the sin/t^2 - cos/t cancellation.
    const double t2 = t * t;
    return t / 3.0 * (1.0 - t2 / 10.0 * (1.0 - t2 / 28.0 * (1.0 - t2 / 54.0)));
  }
  return (std::sin(t) / t - std::cos(t)) / t;
}

}  // namespace

std::vector<double> sph_bessel_j_table(int n_max, double t) {
  check_order(n_max);
  check_argument(t);
  const int start = miller_start(n_max, t);
  std::vector<double> out(static_cast<std::size_t>(n_max) + 2, 0.0);

  double f_next = 0.0;  // f_{k+1}
  double f = 1e-300;    // f_k, k = start
  for (int k = start; k >= 1; --k) {
    const double f_prev = (2.0 * k + 1.0) / t * f - f_next;
    f_next = f;
    f = f_prev;
    if (k - 1 <= n_max + 1) out[k - 1] = f;
    if (k <= n_max + 1) out[k] = f_next;
    if (std::abs(f) > 1e250) {
      f *= 1e-250;
      f_next *= 1e-250;
      for (int i = k - 1; i <= std::min(n_max + 1, start); ++i) out[i] *= 1e-250;
    }
  }
  // Normalize against whichever closed form is larger in magnitude.
  const double j0 = j0_closed(t);
  const double j1 = j1_closed(t);
  const double scale = std::abs(j0) >= std::abs(j1) ? j0 / out[0] : j1 / out[1];
  for (double& v : out) v *= scale;
  out.resize(static_cast<std::size_t>(n_max) + 1);
  return out;
}

std::vector<double> sph_bessel_y_table(int n_max, double t) {
  check_order(n_max);
  check_argument(t);
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
  out[0] = -std::cos(t) / t;
  if (n_max >= 1) out[1] = -std::cos(t) / (t * t) - std::sin(t) / t;
  for (int n = 1; n < n_max; ++n) {
    out[n + 1] = (2.0 * n + 1.0) / t * out[n] - out[n - 1];
  }
  if (!std::isfinite(out[n_max])) {
    throw NumericalOverflow("y_" + std::to_string(n_max) + "(" + std::to_string(t) +
                            ") overflows double precision");
  }
  return out;
}

double sph_bessel_j(int n, double t) { return sph_bessel_j_table(n, t)[n]; }

double sph_bessel_y(int n, double t) { return sph_bessel_y_table(n, t)[n]; }

Complex sph_hankel1(int n, double t) {
  return {sph_bessel_j(n, t), sph_bessel_y(n, t)};
}

double sph_bessel_j_prime(int n, double t) {
  check_order(n);
  if (n == 0) return -sph_bessel_j(1, t);
  const auto j = sph_bessel_j_table(n, t);
  return j[n - 1] - (n + 1.0) / t * j[n];
}

double sph_bessel_y_prime(int n, double t) {
  check_order(n);
  if (n == 0) return -sph_bessel_y(1, t);
  const auto y = sph_bessel_y_table(n, t);
  return y[n - 1] - (n + 1.0) / t * y[n];
}

std::vector<RiccatiPair> riccati_table(int n_max, double t) {
  check_order(n_max);
  check_argument(t);
  // Order n_max + 1 is needed for the n = 0 derivative only; stay within cap.
  const int top = std::min(n_max + 1, kMaxOrder);
  const auto j = sph_bessel_j_table(top, t);
  const auto y = sph_bessel_y_table(top, t);
  std::vector<RiccatiPair> out(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    const Complex h{j[n], y[n]};
    double jp = 0.0;
    Complex hp;
    if (n == 0) {
      jp = -j[1];
      hp = -Complex{j[1], y[1]};
    } else {
      jp = j[n - 1] - (n + 1.0) / t * j[n];
      hp = Complex{j[n - 1], y[n - 1]} - (n + 1.0) / t * h;
    }
    RiccatiPair& r = out[n];
    r.psi = t * j[n];
    r.psi_prime = j[n] + t * jp;
    r.zeta = t * h;
    r.zeta_prime = h + t * hp;
  }
  return out;
}

RiccatiPair riccati(int n, double t) { return riccati_table(n, t)[n]; }

double assoc_legendre_normalized(int n, int m, double x) {
  check_order(n);
  if (std::abs(m) > n) {
    throw DomainError("|m| = " + std::to_string(std::abs(m)) + " exceeds n = " + std::to_string(n));
  }
  if (!(std::abs(x) <= 1.0)) throw DomainError("|x| > 1 in associated Legendre function");
  const int am = std::abs(m);
  const double s = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));

  double pmm = 1.0 / std::sqrt(4.0 * kPi);
  for (int i = 1; i <= am; ++i) pmm *= -std::sqrt((2.0 * i + 1.0) / (2.0 * i)) * s;
  double result = pmm;
  if (n > am) {
    double p_lm2 = pmm;
    double p_lm1 = x * std::sqrt(2.0 * am + 3.0) * pmm;
    result = p_lm1;
    for (int l = am + 2; l <= n; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - am * am));
      const double b = std::sqrt(((l - 1.0) * (l - 1.0) - am * am) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      const double p_l = a * (x * p_lm1 - b * p_lm2);
      p_lm2 = p_lm1;
      p_lm1 = p_l;
      result = p_l;
    }
  }
  if (m < 0 && (am % 2 == 1)) result = -result;
  return result;
}

LegendreTable::LegendreTable(int n_max, double theta) : n_max_(n_max) {
  check_order(n_max);
  const std::size_t size = index(n_max, n_max) + 1;
  p_.assign(size, 0.0);
  dp_.assign(size, 0.0);
  mps_.assign(size, 0.0);
  const double x = std::cos(theta);
  const double s = std::sin(theta);

  // Column-wise (fixed m) three-term recurrence in n.
  double pmm = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 0; m <= n_max; ++m) {
    if (m > 0) pmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    p_[index(m, m)] = pmm;
    if (m + 1 <= n_max) p_[index(m + 1, m)] = x * std::sqrt(2.0 * m + 3.0) * pmm;
    for (int l = m + 2; l <= n_max; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - m * m));
      const double b = std::sqrt(((l - 1.0) * (l - 1.0) - m * m) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      p_[index(l, m)] = a * (x * p_[index(l - 1, m)] - b * p_[index(l - 2, m)]);
    }
  }

  auto p_signed = [&](int n, int m) -> double {
    if (m > n || -m > n) return 0.0;
    if (m >= 0) return p_[index(n, m)];
    return ((-m) % 2 == 0 ? 1.0 : -1.0) * p_[index(n, -m)];
  };

  for (int n = 0; n <= n_max; ++n) {
    for (int m = 0; m <= n; ++m) {
      dp_[index(n, m)] =
          0.5 * (std::sqrt(static_cast<double>(n - m) * (n + m + 1)) * p_signed(n, m + 1) -
                 std::sqrt(static_cast<double>(n + m) * (n - m + 1)) * p_signed(n, m - 1));
      if (m >= 1) {
        const double c = -0.5 * std::sqrt((2.0 * n + 1.0) / (2.0 * n - 1.0));
        mps_[index(n, m)] =
            c * (std::sqrt(static_cast<double>(n + m) * (n + m - 1)) * p_signed(n - 1, m - 1) +
                 std::sqrt(static_cast<double>(n - m) * (n - m - 1)) * p_signed(n - 1, m + 1));
      }
    }
  }
}

}  // namespace polyscat::specfun
