#include "polyscat/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <string>

#include "polyscat/errors.hpp"

namespace polyscat::quad {

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs at least one node");
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

namespace {

// Kronrod 15-point abscissae and weights with the embedded Gauss 7-point weights.
constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  std::vector<Complex> value;
  double error;
  double resabs;  // integral of the largest |component|, for the roundoff floor
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<void(double, std::vector<Complex>&)>& f, std::size_t nc,
             double a, double b, std::vector<Complex>& scratch) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::vector<Complex> kron(nc, Complex{}), gauss(nc, Complex{});
  std::vector<double> absk(nc, 0.0);
  f(c, scratch);
  for (std::size_t q = 0; q < nc; ++q) {
    kron[q] += kWk[7] * scratch[q];
    gauss[q] += kWg[3] * scratch[q];
    absk[q] += kWk[7] * std::abs(scratch[q]);
  }
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXk[j];
    f(c - dx, scratch);
    std::vector<Complex> lo = scratch;
    f(c + dx, scratch);
    for (std::size_t q = 0; q < nc; ++q) {
      const Complex s = lo[q] + scratch[q];
      kron[q] += kWk[j] * s;
      absk[q] += kWk[j] * (std::abs(lo[q]) + std::abs(scratch[q]));
      if (j % 2 == 1) gauss[q] += kWg[j / 2] * s;
    }
  }
  Segment seg{a, b, std::vector<Complex>(nc), 0.0, 0.0};
  for (std::size_t q = 0; q < nc; ++q) {
    seg.value[q] = kron[q] * h;
    seg.error = std::max(seg.error, std::abs((kron[q] - gauss[q]) * h));
    seg.resabs = std::max(seg.resabs, absk[q] * std::abs(h));
  }
  return seg;
}

}  // namespace

AdaptiveVectorResult integrate_vector(const std::function<void(double, std::vector<Complex>&)>& f,
                                      std::size_t components, double a, double b,
                                      const AdaptiveOptions& opts) {
  AdaptiveVectorResult out;
  out.value.assign(components, Complex{});
  if (a == b) return out;
  std::vector<Complex> scratch(components);
  std::priority_queue<Segment> heap;
  heap.push(gk15(f, components, a, b, scratch));
  out.evaluations = 15;
  int splits = 0;
  auto totals = [&](std::vector<Complex>& value) {
    double err = 0.0;
    value.assign(components, Complex{});
    auto copy = heap;
    while (!copy.empty()) {
      const Segment& s = copy.top();
      for (std::size_t q = 0; q < components; ++q) value[q] += s.value[q];
      err += s.error;
      copy.pop();
    }
    return err;
  };
  double err = heap.top().error;
  double resabs = heap.top().resabs;
  while (true) {
    double scale = 0.0;
    if (opts.rel_tol > 0.0) {
      std::vector<Complex> v;
      totals(v);
      for (const auto& c : v) scale = std::max(scale, std::abs(c));
    }
    // Below a few hundred eps of the absolute integral the estimate is roundoff noise.
    const double floor = 200.0 * std::numeric_limits<double>::epsilon() * opts.noise_scale * resabs;
    const double tol = std::max({opts.abs_tol, opts.rel_tol * scale, floor});
    if (err <= tol) break;
    if (splits >= opts.max_subdivisions) {
      std::ostringstream msg;
      msg << "adaptive quadrature did not converge: error estimate " << err << " > tolerance " << tol
          << " after " << splits << " subdivisions";
      throw QuadratureFailure(msg.str());
    }
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = gk15(f, components, worst.a, mid, scratch);
    Segment right = gk15(f, components, mid, worst.b, scratch);
    err += left.error + right.error - worst.error;
    resabs += left.resabs + right.resabs - worst.resabs;
    heap.push(std::move(left));
    heap.push(std::move(right));
    out.evaluations += 30;
    ++splits;
  }
  out.error_estimate = totals(out.value);
  return out;
}

AdaptiveResult integrate(const std::function<Complex(double)>& f, double a, double b,
                         const AdaptiveOptions& opts) {
  auto r = integrate_vector([&](double s, std::vector<Complex>& v) { v[0] = f(s); }, 1, a, b, opts);
  return {r.value[0], r.error_estimate, r.evaluations};
}

}  // namespace polyscat::quad
