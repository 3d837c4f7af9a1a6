#pragma once

#include <optional>
#include <string>

#include "corrdesign/basis.hpp"
#include "corrdesign/designs.hpp"
#include "corrdesign/kernels.hpp"

namespace corrdesign {

// How a singular kernel is evaluated at coinciding points.
//  Smooth: the whole kernel is replaced by its smoothed approximant with
//          half-width equal to half the minimal support gap.
//  Cell:   a coinciding pair takes the mean of K over the atom's cell square;
//          a point inside an atom's cell takes the mean of K(x, .) over that
//          cell; all other pairs use K itself.
//  Error:  coinciding points raise SingularDiagonalError.
enum class DiagonalPolicy { Smooth, Cell, Error };

std::string to_string(DiagonalPolicy policy);
DiagonalPolicy diagonal_policy_from_string(const std::string& name);

struct MomentOptions {
  DiagonalPolicy policy = DiagonalPolicy::Smooth;
  // Pins the smoothing half-width instead of deriving it from the support.
  std::optional<double> smoothing_halfwidth;
  double condition_limit = 1e12;
};

// Kernel between the atoms of a design and arbitrary points, with the
// diagonal policy applied. For non-singular kernels this is K itself.
class ResolvedKernel {
 public:
  // `smoothing_support` decides the smoothing half-width under the Smooth
  // policy (defaults to the support of `design`).
  ResolvedKernel(const CovarianceKernel& kernel, const Design& design, const MomentOptions& options = {},
                 const Vector* smoothing_support = nullptr);

  // [K(x_i, y)]_i over the atoms x_i of the design.
  Vector column(double y) const;
  // [K(x_i, y_j)]
  Matrix cross(const Vector& y) const;
  // Square matrix over the atoms.
  Matrix gram() const;

  const CovarianceKernel& effective_kernel() const { return effective_; }
  double smoothing_halfwidth() const { return smoothing_; }

 private:
  Design design_;
  CovarianceKernel kernel_;
  CovarianceKernel effective_;
  DiagonalPolicy policy_;
  bool singular_;
  double smoothing_ = 0.0;
  Vector square_means_;
};

struct MomentSet {
  Matrix M;
  Matrix B;
  Matrix Lambda;  // B M^{-1}
  Matrix D;       // M^{-1} B M^{-1}
  Matrix M_inv;
  double condition_M = 0.0;
  double smoothing_halfwidth = 0.0;
};

// sum_i w_i f(x_i) f(x_i)^T
Matrix info_matrix(const Design& design, const RegressionBasis& basis);

// sum_ij w_i v_j K(x_i, y_j) f(x_i) f(y_j)^T
Matrix b_matrix(const Design& xi, const Design& nu, const RegressionBasis& basis, const CovarianceKernel& kernel,
                const MomentOptions& options = {});

MomentSet cov_matrix(const Design& design, const RegressionBasis& basis, const CovarianceKernel& kernel,
                     const MomentOptions& options = {});

// (X^T X)^{-1} X^T Sigma X (X^T X)^{-1} for observations at `points`.
Matrix exact_lse_cov(const Vector& points, const RegressionBasis& basis, const CovarianceKernel& kernel);

// Covariance of the weighted LSE built with `guess` when the errors follow
// `truth`.
Matrix wlse_misspec_cov(const Vector& points, const RegressionBasis& basis, const CovarianceKernel& guess,
                        const CovarianceKernel& truth);

}  // namespace corrdesign
