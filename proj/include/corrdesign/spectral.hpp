#pragma once

#include <functional>
#include <string>
#include <vector>

#include "corrdesign/designs.hpp"
#include "corrdesign/kernels.hpp"

namespace corrdesign {

// Candidate eigenpair of the integral operator (T f)(x) = int K(x, u) f(u) nu(du).
struct EigenPairSpec {
  std::string name;
  CovarianceKernel kernel;
  DensityDesign measure;
  std::function<double(double)> eigenfunction;
  double eigenvalue = 0;
  // The empirical eigenvalue is reported as weight_scale * (T f)(x0) / f(x0);
  // use it when the closed form refers to an unnormalized weight.
  double weight_scale = 1.0;
};

struct MercerResidual {
  double max_residual = 0;       // max |scale * (T f)(x) - lambda f(x)|
  double relative_residual = 0;  // max_residual / (|lambda| max |f|)
  double empirical_eigenvalue = 0;
  double reference_point = 0;
  double quadrature_error = 0;   // largest error estimate of the quadrature
};

// (T f)(x) by tanh-sinh quadrature split at x. The quadrature error estimate
// is written to *error when given.
double apply_integral_operator(const CovarianceKernel& kernel, const DensityDesign& measure,
                               const std::function<double(double)>& f, double x, int quad_n,
                               double* error = nullptr);

// Throws NumericalError when the quadrature error estimate exceeds quad_tol
// (relative to the size of the result).
MercerResidual mercer_residual(const EigenPairSpec& spec, const Vector& test_points, int quad_n = 256,
                               double quad_tol = 1e-8);

// First k_max positive roots of tan(2w) = -2 lambda w / (lambda^2 - w^2),
// one in each interval ((k-1) pi/2, k pi/2).
std::vector<double> exp_kernel_frequencies(double lambda, int k_max);

// Max |lambda_n T_n(x) - int T_n(v) (-ln (x - v)^2) dv / (pi sqrt(1 - v^2))|.
double chebyshev_log_identity(int n, const Vector& x_points, int quad_n = 2048);
// 2 ln 2 for n = 0, 2/n otherwise.
double chebyshev_log_eigenvalue(int n);

// pi Gamma(n + alpha) / (cos(alpha pi / 2) Gamma(alpha) n!)
double gegenbauer_power_eigenvalue(int n, double alpha);

// Eigenvalue of the cosine basis function f_j: int_0^1 rho(u) cos(2 pi (j - 1) u) du.
double periodic_eigenvalue(const CovarianceKernel& kernel, int j);
// int_0^1 rho(u) f_j(u) du, which is sqrt(2) times the eigenvalue for j >= 2.
double periodic_basis_integral(const CovarianceKernel& kernel, int j);

// int_0^pi cos(2nt) ln sin^2(t) cos(2kt) dt by quadrature, and in closed form.
double log_sine_fourier_coefficient(int n, int k, int quad_n = 512);
double log_sine_fourier_closed_form(int n, int k);

EigenPairSpec chebyshev_log_pair(int n);
EigenPairSpec cosine_periodic_pair(int j, const CovarianceKernel& kernel);
EigenPairSpec gegenbauer_power_pair(int n, double alpha);
EigenPairSpec brownian_sine_pair(int k);
EigenPairSpec exponential_pair(double lambda, int k);

// Pair by name: "chebyshev-log", "cosine-periodic", "gegenbauer-power",
// "brownian-sine", "exponential".
EigenPairSpec named_pair(const std::string& name, int index, double parameter);

}  // namespace corrdesign
