#include "corrdesign/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace corrdesign {

QuadratureRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw ConfigError("Gauss-Legendre rule needs at least one node");
  QuadratureRule rule{Vector(n), Vector(n)};
  if (n == 1) {
    rule.nodes(0) = 0.5 * (lo + hi);
    rule.weights(0) = hi - lo;
    return rule;
  }
  // Returns P_n(x) and P_n'(x) by the three-term recurrence.
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      auto [p, dp] = legendre(x);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double dp = legendre(x).second;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes(i) = -x;
    rule.nodes(n - 1 - i) = x;
    rule.weights(i) = w;
    rule.weights(n - 1 - i) = w;
  }
  if (n % 2 == 1) rule.nodes(n / 2) = 0.0;
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  rule.nodes = (mid + half * rule.nodes.array()).matrix();
  rule.weights *= half;
  return rule;
}

QuadratureRule gauss_chebyshev(int n) {
  if (n < 1) throw ConfigError("Gauss-Chebyshev rule needs at least one node");
  QuadratureRule rule{Vector(n), Vector::Constant(n, 1.0 / n)};
  for (int k = 1; k <= n; ++k) rule.nodes(k - 1) = -std::cos((2.0 * k - 1.0) * std::numbers::pi / (2.0 * n));
  return rule;
}

namespace {

constexpr double kTanhSinhSpan = 4.5;

double tanh_sinh_sum(const EndpointIntegrand& f, double lo, double hi, int per_side, int stride) {
  const double half = 0.5 * (hi - lo);
  const double h = kTanhSinhSpan / per_side;
  const double pi2 = 0.5 * std::numbers::pi;
  double sum = 0.0;
  for (int k = -per_side; k <= per_side; k += stride) {
    const double t = k * h;
    const double s = pi2 * std::sinh(t);
    const double e = std::exp(-2.0 * std::abs(s));
    const double w = pi2 * std::cosh(t) * 4.0 * e / ((1.0 + e) * (1.0 + e));
    // Distances to the near and far end in units of the half width.
    const double near = 2.0 * e / (1.0 + e);
    const double far = 2.0 / (1.0 + e);
    double d_lo, d_hi;
    if (s >= 0) {
      d_lo = half * far;
      d_hi = half * near;
    } else {
      d_lo = half * near;
      d_hi = half * far;
    }
    if (d_lo <= 0.0 || d_hi <= 0.0) continue;
    const double u = d_lo <= d_hi ? lo + d_lo : hi - d_hi;
    const double v = f(u, d_lo, d_hi);
    if (w != 0.0) sum += w * v;
  }
  return sum * half * h * stride;
}

}  // namespace

QuadratureResult tanh_sinh(const EndpointIntegrand& f, double lo, double hi, int n) {
  if (n < 8) throw ConfigError("tanh-sinh rule needs at least 8 nodes");
  if (!(hi > lo)) return {};
  int per_side = n / 2;
  if (per_side % 2) ++per_side;
  const double fine = tanh_sinh_sum(f, lo, hi, per_side, 1);
  const double coarse = tanh_sinh_sum(f, lo, hi, per_side, 2);
  return {fine, std::abs(fine - coarse)};
}

QuadratureResult tanh_sinh_split(const EndpointIntegrand& f, double lo, double hi,
                                 const std::vector<double>& breaks, int n) {
  std::vector<double> cuts{lo};
  std::vector<double> inner = breaks;
  std::sort(inner.begin(), inner.end());
  for (double b : inner)
    if (b > cuts.back() && b < hi) cuts.push_back(b);
  cuts.push_back(hi);
  QuadratureResult total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    QuadratureResult part = tanh_sinh(f, cuts[i], cuts[i + 1], n);
    total.value += part.value;
    total.error_estimate += part.error_estimate;
  }
  return total;
}

}  // namespace corrdesign
