#pragma once

#include <functional>

#include "corrdesign/linalg.hpp"

namespace corrdesign {

struct QuadratureRule {
  Vector nodes;
  Vector weights;
};

// Gauss-Legendre rule with n nodes on [lo, hi].
QuadratureRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

// Gauss-Chebyshev rule of the first kind with n nodes for the probability
// measure dx / (pi sqrt(1 - x^2)) on [-1, 1]. Nodes ascend.
QuadratureRule gauss_chebyshev(int n);

// Integrand evaluated at u together with the distances u - lo and hi - u,
// which are computed without cancellation near the ends.
using EndpointIntegrand = std::function<double(double u, double d_lo, double d_hi)>;

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

// Tanh-sinh rule with `n` nodes on [lo, hi] (n/2 per half line). Suited to
// integrable singularities at the ends of the interval. The error estimate
// is the difference against the rule with half the nodes.
QuadratureResult tanh_sinh(const EndpointIntegrand& f, double lo, double hi, int n);

// Integral of f over [lo, hi] split at interior points `breaks`, applying
// tanh-sinh on every piece.
QuadratureResult tanh_sinh_split(const EndpointIntegrand& f, double lo, double hi,
                                 const std::vector<double>& breaks, int n);

}  // namespace corrdesign
