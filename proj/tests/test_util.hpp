#pragma once

#include <cmath>
#include <functional>
#include <random>

#include <doctest.h>

#include "corrdesign/linalg.hpp"

namespace testutil {

using corrdesign::Index;
using corrdesign::Matrix;
using corrdesign::Vector;

inline double max_abs(const Matrix& A) { return A.cwiseAbs().maxCoeff(); }

// Composite Simpson rule with n (even) panels; an independent oracle for
// smooth integrands.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// Integral of f(x) (1 - x^2)^((alpha - 1) / 2) over [-1, 1]. The substitution
// x = +-(1 - s^q) with q = 8 / (alpha + 1) turns the end singularities into
// s^3 factors so Simpson's rule converges at its full order.
inline double endpoint_weighted_integral(const std::function<double(double)>& f, double alpha, int n = 20000) {
  const double q = 8.0 / (alpha + 1.0);
  return simpson(
      [&](double s) {
        if (s == 0.0) return 0.0;
        const double sq = std::pow(s, q);
        const double w = std::pow(sq * (2.0 - sq), (alpha - 1.0) / 2.0) * q * std::pow(s, q - 1.0);
        return (f(1.0 - sq) + f(sq - 1.0)) * w;
      },
      0.0, 1.0, n);
}

inline Vector random_weights(std::mt19937_64& rng, Index n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Vector w(n);
  for (Index i = 0; i < n; ++i) w(i) = u(rng);
  return w / w.sum();
}

inline Vector random_signed(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

}  // namespace testutil
