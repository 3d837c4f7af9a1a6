#include "corrdesign/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "corrdesign/basis.hpp"
#include "corrdesign/quadrature.hpp"

namespace corrdesign {

namespace {

constexpr double kPi = std::numbers::pi;

double binomial(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// int_0^1 cos(2 pi a u) cos(2 pi b u) du for integers a, b >= 0.
double cosine_overlap(int a, int b) {
  if (a == 0 && b == 0) return 1.0;
  return a == b ? 0.5 : 0.0;
}

}  // namespace

double apply_integral_operator(const CovarianceKernel& kernel, const DensityDesign& measure,
                               const std::function<double(double)>& f, double x, int quad_n, double* error) {
  const double lo = measure.interval.lo, hi = measure.interval.hi;
  auto k_at = [&](double u, double lag) { return kernel.stationary() ? kernel.at_lag(lag) : kernel(x, u); };
  // Left piece [lo, x]: the distance to x is d_hi.
  auto left = [&](double u, double d_lo, double d_hi) {
    return k_at(u, d_hi) * f(u) * measure.density_from_ends(d_lo, (hi - x) + d_hi);
  };
  // Right piece [x, hi]: the distance to x is d_lo.
  auto right = [&](double u, double d_lo, double d_hi) {
    return k_at(u, d_lo) * f(u) * measure.density_from_ends((x - lo) + d_lo, d_hi);
  };
  QuadratureResult a = tanh_sinh(left, lo, x, quad_n);
  QuadratureResult b = tanh_sinh(right, x, hi, quad_n);
  if (error) *error = a.error_estimate + b.error_estimate;
  return a.value + b.value;
}

MercerResidual mercer_residual(const EigenPairSpec& spec, const Vector& test_points, int quad_n, double quad_tol) {
  if (quad_n < 64) throw ConfigError("Mercer residual needs quad_n >= 64");
  if (test_points.size() == 0) throw ConfigError("Mercer residual needs test points");
  MercerResidual res;
  double fmax = 0.0, best = -1.0;
  for (Index i = 0; i < test_points.size(); ++i) {
    const double x = test_points(i);
    if (!spec.measure.interval.contains(x)) throw DomainError("test point outside the measure's interval");
    double err = 0.0;
    const double Tf = spec.weight_scale * apply_integral_operator(spec.kernel, spec.measure, spec.eigenfunction, x,
                                                                  quad_n, &err);
    err *= spec.weight_scale;
    if (err > quad_tol * (1.0 + std::abs(Tf)))
      throw NumericalError("quadrature for " + spec.name + " did not settle at x = " + std::to_string(x) +
                           " (error estimate " + std::to_string(err) + ")");
    res.quadrature_error = std::max(res.quadrature_error, err);
    const double fx = spec.eigenfunction(x);
    res.max_residual = std::max(res.max_residual, std::abs(Tf - spec.eigenvalue * fx));
    fmax = std::max(fmax, std::abs(fx));
    if (std::abs(fx) > best) {
      best = std::abs(fx);
      res.reference_point = x;
      res.empirical_eigenvalue = Tf / fx;
    }
  }
  if (best <= 0.0) throw NumericalError("eigenfunction vanishes at every test point");
  res.relative_residual = res.max_residual / (std::abs(spec.eigenvalue) * fmax);
  return res;
}

std::vector<double> exp_kernel_frequencies(double lambda, int k_max) {
  if (!(lambda > 0) || !std::isfinite(lambda)) throw ConfigError("exponential kernel needs lambda > 0");
  if (k_max < 1) throw ConfigError("need k_max >= 1");
  std::vector<double> roots;
  for (int k = 1; k <= k_max; ++k) {
    // Cosine-type roots solve w tan w = lambda, sine-type roots w cot w = -lambda.
    auto h = [lambda, k](double w) {
      return k % 2 ? w * std::sin(w) - lambda * std::cos(w) : w * std::cos(w) + lambda * std::sin(w);
    };
    double a = (k - 1) * kPi / 2, b = k * kPi / 2;
    double ha = h(a), hb = h(b);
    if (ha * hb > 0)
      throw NumericalError("no sign change for root " + std::to_string(k) + " in [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]");
    for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
      const double mid = 0.5 * (a + b);
      const double hm = h(mid);
      if ((hm < 0) == (ha < 0)) {
        a = mid;
        ha = hm;
      } else {
        b = mid;
      }
    }
    roots.push_back(0.5 * (a + b));
  }
  return roots;
}

double chebyshev_log_eigenvalue(int n) {
  if (n < 0) throw ConfigError("Chebyshev degree must be nonnegative");
  return n == 0 ? 2.0 * std::numbers::ln2 : 2.0 / n;
}

double chebyshev_log_identity(int n, const Vector& x_points, int quad_n) {
  EigenPairSpec spec = chebyshev_log_pair(n);
  double worst = 0.0;
  for (Index i = 0; i < x_points.size(); ++i) {
    const double x = x_points(i);
    if (!(x > -1.0 && x < 1.0)) throw DomainError("Chebyshev identity needs points in (-1, 1)");
    const double rhs = apply_integral_operator(spec.kernel, spec.measure, spec.eigenfunction, x, quad_n);
    worst = std::max(worst, std::abs(spec.eigenvalue * chebyshev_t(n, x) - rhs));
  }
  return worst;
}

double gegenbauer_power_eigenvalue(int n, double alpha) {
  if (n < 0 || !(alpha > 0 && alpha < 1)) throw ConfigError("need n >= 0 and alpha in (0, 1)");
  return kPi * std::exp(std::lgamma(n + alpha) - std::lgamma(alpha) - std::lgamma(n + 1.0)) /
         std::cos(alpha * kPi / 2);
}

double periodic_eigenvalue(const CovarianceKernel& kernel, int j) {
  if (kernel.family() != KernelFamily::PeriodicCosMix) throw ConfigError("periodic eigenvalue needs a cosine mixture");
  if (j < 1) throw ConfigError("cosine index starts at 1");
  const int freq = j - 1;
  double total = 0.0;
  for (const auto& t : kernel.terms()) {
    // cos^p(theta) = 2^-p sum_r C(p, r) cos((p - 2r) theta)
    double s = 0.0;
    for (int r = 0; r <= t.power; ++r)
      s += binomial(t.power, r) * cosine_overlap(std::abs(t.power - 2 * r) * t.frequency, freq);
    total += t.weight * std::ldexp(s, -t.power);
  }
  // at_lag(0) carries the kernel scale (the mixture weights sum to one).
  return total * kernel.at_lag(0.0);
}

double periodic_basis_integral(const CovarianceKernel& kernel, int j) {
  return (j == 1 ? 1.0 : std::numbers::sqrt2) * periodic_eigenvalue(kernel, j);
}

double log_sine_fourier_coefficient(int n, int k, int quad_n) {
  auto f = [n, k](double t, double d_lo, double d_hi) {
    const double s = std::sin(std::min(d_lo, d_hi));
    return std::cos(2.0 * n * t) * 2.0 * std::log(s) * std::cos(2.0 * k * t);
  };
  return tanh_sinh(f, 0.0, kPi, quad_n).value;
}

double log_sine_fourier_closed_form(int n, int k) {
  auto gamma = [](int q) { return q == 0 ? -2.0 * kPi * std::numbers::ln2 : -kPi / q; };
  return 0.5 * (gamma(std::abs(n + k)) + gamma(std::abs(n - k)));
}

EigenPairSpec chebyshev_log_pair(int n) {
  EigenPairSpec spec{"chebyshev-log", CovarianceKernel::logarithmic(), arcsine_design(),
                     [n](double x) { return chebyshev_t(n, x); }, chebyshev_log_eigenvalue(n), 1.0};
  return spec;
}

EigenPairSpec cosine_periodic_pair(int j, const CovarianceKernel& kernel) {
  RegressionBasis basis = RegressionBasis::cosine_series({j});
  if (!(periodic_eigenvalue(kernel, j) > 0))
    throw ConfigError("cosine index " + std::to_string(j) + " is outside the spectrum of " + kernel.describe());
  EigenPairSpec spec{"cosine-periodic", kernel, uniform_density({0.0, 1.0}),
                     [basis](double x) { return basis(x)(0); }, periodic_eigenvalue(kernel, j), 1.0};
  return spec;
}

EigenPairSpec gegenbauer_power_pair(int n, double alpha) {
  const double lambda = alpha / 2;
  EigenPairSpec spec{"gegenbauer-power", CovarianceKernel::power_singular(alpha), generalized_arcsine_design(alpha),
                     [n, lambda](double x) { return gegenbauer_values(n, lambda, x)(n); },
                     gegenbauer_power_eigenvalue(n, alpha), 1.0 / generalized_arcsine_constant(alpha)};
  return spec;
}

EigenPairSpec brownian_sine_pair(int k) {
  if (k < 0) throw ConfigError("Brownian eigenpair index must be nonnegative");
  const double w = (k + 0.5) * kPi;
  EigenPairSpec spec{"brownian-sine", CovarianceKernel::brownian_min(), uniform_density({0.0, 1.0}),
                     [w](double x) { return std::sin(w * x); }, 1.0 / (w * w), 1.0};
  return spec;
}

EigenPairSpec exponential_pair(double lambda, int k) {
  const double w = exp_kernel_frequencies(lambda, k).back();
  const double shift = k * kPi / 2;
  EigenPairSpec spec{"exponential", CovarianceKernel::exponential(lambda), uniform_density({-1.0, 1.0}),
                     [w, shift](double x) { return std::sin(w * x + shift); }, lambda / (lambda * lambda + w * w),
                     1.0};
  return spec;
}

EigenPairSpec named_pair(const std::string& name, int index, double parameter) {
  if (name == "chebyshev-log") return chebyshev_log_pair(index);
  if (name == "cosine-periodic") return cosine_periodic_pair(index, CovarianceKernel::periodic_default());
  if (name == "gegenbauer-power") return gegenbauer_power_pair(index, parameter);
  if (name == "brownian-sine") return brownian_sine_pair(index);
  if (name == "exponential") return exponential_pair(parameter, index);
  throw ConfigError("unknown eigenpair '" + name + "'");
}

}  // namespace corrdesign
