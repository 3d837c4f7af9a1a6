#include "corrdesign/moments.hpp"

#include <algorithm>
#include <cmath>

#include "corrdesign/quadrature.hpp"

namespace corrdesign {

namespace {

bool coincide(double a, double b) { return std::abs(a - b) <= 1e-14 * (1.0 + std::abs(a) + std::abs(b)); }

Vector union_support(const Design& a, const Design& b) {
  Vector u(a.size() + b.size());
  u << a.support(), b.support();
  return u;
}

void require_finite_kernel(const CovarianceKernel& kernel, const char* what) {
  if (kernel.singular_on_diagonal())
    throw ConfigError(std::string(what) + " needs a non-singular kernel, got " + kernel.describe());
}

// Mean of K(x, u) over the cell [lo, hi] under the density the design
// discretizes. The integral is split at x; distances to x and to the ends of
// the density's interval are passed exactly so that both the kernel and the
// density singularities are resolved.
double density_cell_mean(const CovarianceKernel& kernel, const DensityDesign& dd, double x, double lo, double hi) {
  constexpr int kNodes = 160;
  const Interval iv = dd.interval;
  auto density = [&](double u, double seg_lo, double d_lo, double seg_hi, double d_hi) {
    const double to_lo = seg_lo == iv.lo ? d_lo : u - iv.lo;
    const double to_hi = seg_hi == iv.hi ? d_hi : iv.hi - u;
    return dd.density_from_ends(to_lo, to_hi);
  };
  double num = 0.0, mass = 0.0;
  if (x > lo) {
    num += tanh_sinh([&](double u, double dl, double dh) { return kernel.at_lag(dh) * density(u, lo, dl, x, dh); },
                     lo, x, kNodes)
               .value;
    mass += tanh_sinh([&](double u, double dl, double dh) { return density(u, lo, dl, x, dh); }, lo, x, kNodes).value;
  }
  if (x < hi) {
    num += tanh_sinh([&](double u, double dl, double dh) { return kernel.at_lag(dl) * density(u, x, dl, hi, dh); },
                     x, hi, kNodes)
               .value;
    mass += tanh_sinh([&](double u, double dl, double dh) { return density(u, x, dl, hi, dh); }, x, hi, kNodes).value;
  }
  return num / mass;
}

}  // namespace

std::string to_string(DiagonalPolicy policy) {
  switch (policy) {
    case DiagonalPolicy::Smooth:
      return "smooth";
    case DiagonalPolicy::Cell:
      return "cell";
    case DiagonalPolicy::Error:
      return "error";
  }
  return "unknown";
}

DiagonalPolicy diagonal_policy_from_string(const std::string& name) {
  if (name == "smooth") return DiagonalPolicy::Smooth;
  if (name == "cell") return DiagonalPolicy::Cell;
  if (name == "error") return DiagonalPolicy::Error;
  throw ConfigError("unknown diagonal policy '" + name + "'");
}

ResolvedKernel::ResolvedKernel(const CovarianceKernel& kernel, const Design& design, const MomentOptions& options,
                               const Vector* smoothing_support)
    : design_(design),
      kernel_(kernel),
      effective_(kernel),
      policy_(options.policy),
      singular_(kernel.singular_on_diagonal()) {
  if (!singular_) return;
  switch (policy_) {
    case DiagonalPolicy::Smooth:
      smoothing_ = options.smoothing_halfwidth
                       ? *options.smoothing_halfwidth
                       : half_min_gap(smoothing_support ? *smoothing_support : design.support());
      effective_ = kernel.smoothed(smoothing_);
      break;
    case DiagonalPolicy::Cell:
      if (design.size() < 2) throw NumericalError("cell policy needs a design with at least two atoms");
      square_means_.resize(design.size());
      for (Index i = 0; i < design.size(); ++i)
        square_means_(i) = kernel.cell_square_mean(design.cell_edges()(i), design.cell_edges()(i + 1));
      break;
    case DiagonalPolicy::Error:
      break;
  }
}

Vector ResolvedKernel::column(double y) const {
  const Vector& x = design_.support();
  Vector k(x.size());
  if (!singular_ || policy_ == DiagonalPolicy::Smooth) {
    for (Index i = 0; i < x.size(); ++i) k(i) = effective_(x(i), y);
    return k;
  }
  const Index home = policy_ == DiagonalPolicy::Cell ? design_.cell_of(y) : -1;
  for (Index i = 0; i < x.size(); ++i) {
    if (coincide(x(i), y)) {
      if (policy_ == DiagonalPolicy::Error)
        throw SingularDiagonalError("singular kernel at coinciding points x = " + std::to_string(y) +
                                    " with the 'error' diagonal policy");
      k(i) = square_means_(i);
    } else if (i == home) {
      const double lo = design_.cell_edges()(i), hi = design_.cell_edges()(i + 1);
      k(i) = design_.density() && kernel_.stationary() ? density_cell_mean(kernel_, *design_.density(), y, lo, hi)
                                                       : kernel_.cell_mean(y, lo, hi);
    } else {
      k(i) = kernel_(x(i), y);
    }
  }
  return k;
}

Matrix ResolvedKernel::cross(const Vector& y) const {
  Matrix G(design_.size(), y.size());
  for (Index j = 0; j < y.size(); ++j) G.col(j) = column(y(j));
  return G;
}

Matrix ResolvedKernel::gram() const {
  Matrix G = cross(design_.support());
  return (G + G.transpose()) / 2.0;
}

Matrix info_matrix(const Design& design, const RegressionBasis& basis) {
  return weighted_gram(basis.design_matrix(design.support()), design.weights());
}

Matrix b_matrix(const Design& xi, const Design& nu, const RegressionBasis& basis, const CovarianceKernel& kernel,
                const MomentOptions& options) {
  const bool same = &xi == &nu || (xi.support() == nu.support() && xi.weights() == nu.weights());
  Vector support = union_support(xi, nu);
  ResolvedKernel rk(kernel, xi, options, same ? nullptr : &support);
  Matrix Fx = basis.design_matrix(xi.support());
  Matrix Fy = basis.design_matrix(nu.support());
  Matrix G = same ? rk.gram() : rk.cross(nu.support());
  Matrix B = Fx.transpose() * xi.weights().asDiagonal() * G * nu.weights().asDiagonal() * Fy;
  if (same) B = (B + B.transpose()) / 2.0;
  return B;
}

MomentSet cov_matrix(const Design& design, const RegressionBasis& basis, const CovarianceKernel& kernel,
                     const MomentOptions& options) {
  MomentSet ms;
  ms.M = info_matrix(design, basis);
  ms.condition_M = symmetric_condition(ms.M);
  ms.M_inv = spd_inverse(ms.M, options.condition_limit, "information matrix M");
  ResolvedKernel rk(kernel, design, options);
  ms.smoothing_halfwidth = rk.smoothing_halfwidth();
  Matrix F = basis.design_matrix(design.support());
  Matrix WF = design.weights().asDiagonal() * F;
  ms.B = WF.transpose() * rk.gram() * WF;
  ms.B = (ms.B + ms.B.transpose()) / 2.0;
  ms.Lambda = ms.B * ms.M_inv;
  ms.D = sandwich(ms.M_inv, ms.B);
  return ms;
}

Matrix exact_lse_cov(const Vector& points, const RegressionBasis& basis, const CovarianceKernel& kernel) {
  require_finite_kernel(kernel, "exact LSE covariance");
  if (points.size() < basis.size()) throw ConfigError("need at least m observation points");
  Matrix X = basis.design_matrix(points);
  Matrix XtX_inv = spd_inverse(Matrix(X.transpose() * X), 1e12, "X^T X");
  Matrix Sigma = gram_matrix(kernel, points);
  return sandwich(Matrix(XtX_inv * X.transpose()), Sigma);
}

Matrix wlse_misspec_cov(const Vector& points, const RegressionBasis& basis, const CovarianceKernel& guess,
                        const CovarianceKernel& truth) {
  require_finite_kernel(guess, "weighted LSE covariance");
  require_finite_kernel(truth, "weighted LSE covariance");
  if (points.size() < basis.size()) throw ConfigError("need at least m observation points");
  Matrix X = basis.design_matrix(points);
  Matrix Sg_inv = spd_inverse(gram_matrix(guess, points), 1e12, "assumed covariance matrix");
  Matrix A_inv = spd_inverse(Matrix(X.transpose() * Sg_inv * X), 1e12, "X^T Sigma^{-1} X");
  Matrix P = A_inv * X.transpose() * Sg_inv;
  return sandwich(P, gram_matrix(truth, points));
}

}  // namespace corrdesign
