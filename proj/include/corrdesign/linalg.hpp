#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "corrdesign/errors.hpp"

namespace corrdesign {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// F^T diag(w) F for a row-per-point design matrix F.
template <typename DerivedF, typename DerivedW>
auto weighted_gram(const Eigen::MatrixBase<DerivedF>& F, const Eigen::MatrixBase<DerivedW>& w) {
  using Scalar = typename DerivedF::Scalar;
  using Result = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Result out = F.transpose() * w.asDiagonal() * F;
  return Result((out + out.transpose()) / Scalar(2));
}

// A X A^T with the result symmetrized.
template <typename DerivedA, typename DerivedX>
auto sandwich(const Eigen::MatrixBase<DerivedA>& A, const Eigen::MatrixBase<DerivedX>& X) {
  using Scalar = typename DerivedA::Scalar;
  using Result = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Result out = A * X * A.transpose();
  return Result((out + out.transpose()) / Scalar(2));
}

template <typename Derived>
typename Derived::Scalar symmetric_condition(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  using Plain = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<Plain> es(Plain(A), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  Scalar lo = ev.cwiseAbs().minCoeff();
  Scalar hi = ev.cwiseAbs().maxCoeff();
  if (lo == Scalar(0)) return std::numeric_limits<Scalar>::infinity();
  return hi / lo;
}

// Inverse of a symmetric positive definite matrix. Throws NearSingularError
// when the condition number exceeds `condition_limit` or the matrix is not
// positive definite.
template <typename Derived>
auto spd_inverse(const Eigen::MatrixBase<Derived>& A, double condition_limit, const char* what) {
  using Scalar = typename Derived::Scalar;
  using Plain = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Plain S = (A + A.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Plain> es(S);
  const auto& ev = es.eigenvalues();
  Scalar lo = ev.minCoeff();
  Scalar hi = ev.cwiseAbs().maxCoeff();
  double cond = lo > Scalar(0) ? double(hi / lo) : std::numeric_limits<double>::infinity();
  if (!(cond <= condition_limit)) throw NearSingularError(std::string(what) + " is not invertible", cond);
  Eigen::LLT<Plain> llt(S);
  Plain inv = llt.solve(Plain::Identity(S.rows(), S.cols()));
  return Plain((inv + inv.transpose()) / Scalar(2));
}

// log det of a symmetric positive definite matrix.
template <typename Derived>
typename Derived::Scalar spd_logdet(const Eigen::MatrixBase<Derived>& A) {
  using Scalar = typename Derived::Scalar;
  using Plain = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::LLT<Plain> llt(Plain((A + A.transpose()) / Scalar(2)));
  if (llt.info() != Eigen::Success) throw NumericalError("log-determinant of a matrix that is not positive definite");
  return Scalar(2) * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace corrdesign
