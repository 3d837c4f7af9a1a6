#pragma once

#include <string>
#include <vector>

#include "corrdesign/interval.hpp"
#include "corrdesign/linalg.hpp"

namespace corrdesign {

enum class BasisFamily { Monomial, Chebyshev, Gegenbauer, CosineSeries, Tabulated };

std::string to_string(BasisFamily family);

// Regression functions f(x) = (f_1(x), ..., f_m(x)) on a closed interval.
class RegressionBasis {
 public:
  // (1, x, ..., x^(m-1))
  static RegressionBasis monomial(int m, Interval domain = {});
  // (x^p_1, ..., x^p_m) for distinct nonnegative powers.
  static RegressionBasis monomial_powers(std::vector<int> powers, Interval domain = {});
  // (T_0, ..., T_(m-1))
  static RegressionBasis chebyshev(int m, Interval domain = {});
  // (C_0^(lambda), ..., C_(m-1)^(lambda)), unnormalized.
  static RegressionBasis gegenbauer(int m, double lambda, Interval domain = {});
  // f_j(x) = 1 for j = 1 and sqrt(2) cos(2 pi (j - 1) x) otherwise, for the
  // strictly increasing indices given.
  static RegressionBasis cosine_series(std::vector<int> indices, Interval domain = {0.0, 1.0});
  // Piecewise-linear interpolation of the columns of `values` at `nodes`.
  static RegressionBasis tabulated(Vector nodes, Matrix values);

  Vector operator()(double x) const;
  // Rows f(x_i)^T.
  Matrix design_matrix(const Vector& x) const;

  int size() const { return m_; }
  BasisFamily family() const { return family_; }
  const Interval& domain() const { return domain_; }
  const std::vector<int>& powers() const { return powers_; }
  const std::vector<int>& indices() const { return indices_; }
  double gegenbauer_parameter() const { return lambda_; }
  bool polynomial() const;
  // f(x) != 0; points where f vanishes carry no information.
  bool admissible(double x) const;
  // Row i holds the coefficients of f_i in powers 0, 1, ..., degree.
  Matrix monomial_coefficients() const;
  std::string describe() const;

 private:
  RegressionBasis() = default;
  void eval_unchecked(double x, double* out) const;
  void check_independence() const;

  BasisFamily family_ = BasisFamily::Monomial;
  int m_ = 0;
  Interval domain_;
  std::vector<int> powers_;
  std::vector<int> indices_;
  double lambda_ = 0.0;
  Vector table_nodes_;
  Matrix table_values_;
};

// Gegenbauer polynomials C_0^(lambda)(x), ..., C_n^(lambda)(x).
Vector gegenbauer_values(int n, double lambda, double x);
// Chebyshev polynomial T_n(x).
double chebyshev_t(int n, double x);

// L with f_basis(x) = L f_target(x). Both bases must span the same
// polynomial space.
Matrix change_of_basis(const RegressionBasis& basis, const RegressionBasis& target);

// Gram matrix of the basis under the uniform probability measure on its
// domain.
Matrix uniform_gram(const RegressionBasis& basis);

}  // namespace corrdesign
