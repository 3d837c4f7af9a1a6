#include "corrdesign/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "corrdesign/quadrature.hpp"

namespace corrdesign {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void require_domain(const Interval& d) {
  require(std::isfinite(d.lo) && std::isfinite(d.hi) && d.hi > d.lo, "basis domain must be a proper interval");
}

// Coefficients of the Gegenbauer (or, with chebyshev = true, Chebyshev)
// polynomials of degree 0..n-1 in the monomials.
Matrix recurrence_coefficients(int n, double lambda, bool chebyshev) {
  Matrix P = Matrix::Zero(n, n);
  P(0, 0) = 1.0;
  if (n > 1) P(1, 1) = chebyshev ? 1.0 : 2.0 * lambda;
  for (int k = 2; k < n; ++k) {
    if (chebyshev) {
      P.row(k).tail(n - 1) = 2.0 * P.row(k - 1).head(n - 1);
      P.row(k) -= P.row(k - 2);
    } else {
      Vector shifted = Vector::Zero(n);
      shifted.tail(n - 1) = P.row(k - 1).head(n - 1).transpose();
      P.row(k) = (2.0 * (k + lambda - 1.0) * shifted.transpose() - (k + 2.0 * lambda - 2.0) * P.row(k - 2)) / k;
    }
  }
  return P;
}

}  // namespace

std::string to_string(BasisFamily family) {
  switch (family) {
    case BasisFamily::Monomial:
      return "monomial";
    case BasisFamily::Chebyshev:
      return "chebyshev";
    case BasisFamily::Gegenbauer:
      return "gegenbauer";
    case BasisFamily::CosineSeries:
      return "cosine";
    case BasisFamily::Tabulated:
      return "tabulated";
  }
  return "unknown";
}

Vector gegenbauer_values(int n, double lambda, double x) {
  Vector c(n + 1);
  c(0) = 1.0;
  if (n >= 1) c(1) = 2.0 * lambda * x;
  for (int k = 2; k <= n; ++k)
    c(k) = (2.0 * x * (k + lambda - 1.0) * c(k - 1) - (k + 2.0 * lambda - 2.0) * c(k - 2)) / k;
  return c;
}

double chebyshev_t(int n, double x) {
  double t0 = 1.0, t1 = x;
  if (n == 0) return t0;
  for (int k = 2; k <= n; ++k) {
    double t2 = 2.0 * x * t1 - t0;
    t0 = t1;
    t1 = t2;
  }
  return t1;
}

RegressionBasis RegressionBasis::monomial(int m, Interval domain) {
  require(m >= 1, "basis needs m >= 1");
  std::vector<int> powers(m);
  for (int i = 0; i < m; ++i) powers[i] = i;
  return monomial_powers(std::move(powers), domain);
}

RegressionBasis RegressionBasis::monomial_powers(std::vector<int> powers, Interval domain) {
  require(!powers.empty(), "basis needs at least one power");
  require_domain(domain);
  for (int p : powers) require(p >= 0, "monomial powers must be nonnegative");
  std::vector<int> sorted = powers;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "monomial powers must be distinct");
  RegressionBasis b;
  b.family_ = BasisFamily::Monomial;
  b.m_ = static_cast<int>(powers.size());
  b.powers_ = std::move(powers);
  b.domain_ = domain;
  b.check_independence();
  return b;
}

RegressionBasis RegressionBasis::chebyshev(int m, Interval domain) {
  require(m >= 1, "basis needs m >= 1");
  require_domain(domain);
  RegressionBasis b;
  b.family_ = BasisFamily::Chebyshev;
  b.m_ = m;
  b.domain_ = domain;
  b.check_independence();
  return b;
}

RegressionBasis RegressionBasis::gegenbauer(int m, double lambda, Interval domain) {
  require(m >= 1, "basis needs m >= 1");
  require(std::isfinite(lambda) && lambda > 0, "Gegenbauer parameter must be positive");
  require_domain(domain);
  RegressionBasis b;
  b.family_ = BasisFamily::Gegenbauer;
  b.m_ = m;
  b.lambda_ = lambda;
  b.domain_ = domain;
  b.check_independence();
  return b;
}

RegressionBasis RegressionBasis::cosine_series(std::vector<int> indices, Interval domain) {
  require(!indices.empty(), "cosine basis needs at least one index");
  require_domain(domain);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    require(indices[i] >= 1, "cosine indices start at 1");
    if (i > 0) require(indices[i] > indices[i - 1], "cosine indices must increase strictly");
  }
  RegressionBasis b;
  b.family_ = BasisFamily::CosineSeries;
  b.m_ = static_cast<int>(indices.size());
  b.indices_ = std::move(indices);
  b.domain_ = domain;
  b.check_independence();
  return b;
}

RegressionBasis RegressionBasis::tabulated(Vector nodes, Matrix values) {
  require(nodes.size() >= 2, "tabulated basis needs at least two nodes");
  require(values.rows() == nodes.size() && values.cols() >= 1, "tabulated basis values must be n x m");
  for (Index i = 1; i < nodes.size(); ++i) require(nodes(i) > nodes(i - 1), "tabulated basis nodes must ascend");
  require(values.allFinite(), "tabulated basis values must be finite");
  RegressionBasis b;
  b.family_ = BasisFamily::Tabulated;
  b.m_ = static_cast<int>(values.cols());
  b.domain_ = {nodes(0), nodes(nodes.size() - 1)};
  b.table_nodes_ = std::move(nodes);
  b.table_values_ = std::move(values);
  b.check_independence();
  return b;
}

bool RegressionBasis::polynomial() const {
  return family_ == BasisFamily::Monomial || family_ == BasisFamily::Chebyshev ||
         family_ == BasisFamily::Gegenbauer;
}

void RegressionBasis::eval_unchecked(double x, double* out) const {
  switch (family_) {
    case BasisFamily::Monomial:
      for (int i = 0; i < m_; ++i) out[i] = std::pow(x, powers_[i]);
      break;
    case BasisFamily::Chebyshev: {
      out[0] = 1.0;
      if (m_ > 1) out[1] = x;
      for (int k = 2; k < m_; ++k) out[k] = 2.0 * x * out[k - 1] - out[k - 2];
      break;
    }
    case BasisFamily::Gegenbauer: {
      Vector c = gegenbauer_values(m_ - 1, lambda_, x);
      std::copy(c.data(), c.data() + m_, out);
      break;
    }
    case BasisFamily::CosineSeries:
      for (int i = 0; i < m_; ++i) {
        const int j = indices_[i];
        out[i] = j == 1 ? 1.0 : std::numbers::sqrt2 * std::cos(2.0 * std::numbers::pi * (j - 1) * x);
      }
      break;
    case BasisFamily::Tabulated: {
      const Vector& t = table_nodes_;
      const Index n = t.size();
      Index i = std::clamp<Index>(
          static_cast<Index>(std::upper_bound(t.data(), t.data() + n, x) - t.data()) - 1, 0, n - 2);
      const double f = std::clamp((x - t(i)) / (t(i + 1) - t(i)), 0.0, 1.0);
      for (int k = 0; k < m_; ++k) out[k] = (1 - f) * table_values_(i, k) + f * table_values_(i + 1, k);
      break;
    }
  }
}

Vector RegressionBasis::operator()(double x) const {
  if (!domain_.contains(x))
    throw DomainError("x = " + std::to_string(x) + " lies outside the basis domain [" +
                      std::to_string(domain_.lo) + ", " + std::to_string(domain_.hi) + "]");
  Vector f(m_);
  eval_unchecked(x, f.data());
  return f;
}

Matrix RegressionBasis::design_matrix(const Vector& x) const {
  Matrix F(x.size(), m_);
  for (Index i = 0; i < x.size(); ++i) F.row(i) = (*this)(x(i)).transpose();
  return F;
}

bool RegressionBasis::admissible(double x) const { return (*this)(x).cwiseAbs().maxCoeff() > 0.0; }

Matrix RegressionBasis::monomial_coefficients() const {
  switch (family_) {
    case BasisFamily::Monomial: {
      const int degree = *std::max_element(powers_.begin(), powers_.end());
      Matrix P = Matrix::Zero(m_, degree + 1);
      for (int i = 0; i < m_; ++i) P(i, powers_[i]) = 1.0;
      return P;
    }
    case BasisFamily::Chebyshev:
      return recurrence_coefficients(m_, 0.0, true);
    case BasisFamily::Gegenbauer:
      return recurrence_coefficients(m_, lambda_, false);
    default:
      throw ConfigError(to_string(family_) + " basis is not polynomial");
  }
}

void RegressionBasis::check_independence() const {
  Matrix G = uniform_gram(*this);
  Eigen::SelfAdjointEigenSolver<Matrix> es(G, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 1e-10))
    throw ConfigError("basis functions are not linearly independent on the domain");
}

std::string RegressionBasis::describe() const {
  std::ostringstream os;
  os << to_string(family_) << "(m=" << m_;
  if (family_ == BasisFamily::Gegenbauer) os << ", lambda=" << lambda_;
  if (family_ == BasisFamily::Monomial) {
    os << ", powers=";
    for (std::size_t i = 0; i < powers_.size(); ++i) os << (i ? "," : "") << powers_[i];
  }
  if (family_ == BasisFamily::CosineSeries) {
    os << ", indices=";
    for (std::size_t i = 0; i < indices_.size(); ++i) os << (i ? "," : "") << indices_[i];
  }
  os << ")";
  return os.str();
}

Matrix uniform_gram(const RegressionBasis& basis) {
  const Interval d = basis.domain();
  QuadratureRule rule = gauss_legendre(std::max(64, 4 * basis.size()), d.lo, d.hi);
  Matrix F = basis.design_matrix(rule.nodes);
  return weighted_gram(F, rule.weights / d.length());
}

Matrix change_of_basis(const RegressionBasis& basis, const RegressionBasis& target) {
  if (!basis.polynomial() || !target.polynomial() || basis.size() != target.size())
    throw ConfigError("change of basis needs two polynomial bases of equal size");
  Matrix Pb = basis.monomial_coefficients();
  Matrix Pt = target.monomial_coefficients();
  const Index cols = std::max(Pb.cols(), Pt.cols());
  Matrix B = Matrix::Zero(Pb.rows(), cols), T = Matrix::Zero(Pt.rows(), cols);
  B.leftCols(Pb.cols()) = Pb;
  T.leftCols(Pt.cols()) = Pt;
  // Solve L T = B in the least-squares sense and require an exact fit.
  Matrix L = T.transpose().colPivHouseholderQr().solve(B.transpose()).transpose();
  if ((L * T - B).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + B.cwiseAbs().maxCoeff()))
    throw ConfigError("bases span different polynomial spaces");
  return L;
}

}  // namespace corrdesign
