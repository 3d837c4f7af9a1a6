#pragma once

#include <string>
#include <vector>

#include "corrdesign/moments.hpp"

namespace corrdesign {

// Optimality criterion Phi(D) with derivative C = dPhi/dD.
struct Criterion {
  enum class Kind { D, C };
  Kind kind = Kind::D;
  Vector c;  // only for Kind::C

  static Criterion d_optimal() { return {}; }
  static Criterion c_optimal(Vector c);
  // D^{-1} for the D-criterion (Phi = ln det D), c c^T for the c-criterion.
  Matrix derivative(const Matrix& D) const;
  // ln det D or c^T D c.
  double value(const Matrix& D) const;
  std::string describe() const;
};

struct Tolerances {
  double algebraic = 1e-6;
  double grid = 1e-3;
  double weight_floor = 1e-8;
};

// Sensitivity functions of a design:
//   k(x)   = sum_i w_i K(x_i, x) f(x_i)
//   phi(x) = f^T D C M^{-1} f
//   b(x)   = f^T M^{-1} C M^{-1} k(x)
//   d(x)   = f^T M^{-1} f
//   g(x)   = k(x) - Lambda f(x)
//   r(x)   = f^T M^{-1} C M^{-1} g(x) = b(x) - phi(x)
//   psi(x) = phi(x) / b(x)
class Sensitivity {
 public:
  Sensitivity(const Design& design, const RegressionBasis& basis, const CovarianceKernel& kernel,
              const Criterion& criterion, const MomentOptions& options = {});

  struct Point {
    double phi = 0, b = 0, d = 0, r = 0, psi = 0;
    Vector g;
    bool admissible = true;
  };

  Point at(double x) const;
  Vector kernel_moment(double x) const;
  double phi(double x) const;
  double b(double x) const;
  // f^T B^{-1} k(x); equals b(x) for the D-criterion.
  double b_dform(double x) const;
  double d(double x) const;
  Vector g(double x) const;
  // f^T M^{-1} C M^{-1} g(x), evaluated directly.
  double r(double x) const;
  double psi(double x) const;

  const MomentSet& moments() const { return moments_; }
  const Matrix& C() const { return C_; }
  const Design& design() const { return design_; }
  const RegressionBasis& basis() const { return basis_; }
  const Criterion& criterion() const { return criterion_; }
  double criterion_value() const { return criterion_.value(moments_.D); }
  double trace_DC() const { return (moments_.D * C_).trace(); }

 private:
  Design design_;
  RegressionBasis basis_;
  Criterion criterion_;
  MomentSet moments_;
  ResolvedKernel resolved_;
  Matrix C_;
  Matrix weighted_F_;   // rows w_i f(x_i)^T
  Matrix phi_form_;     // D C M^{-1}
  Matrix b_form_;       // M^{-1} C M^{-1}
};

double phi_fn(double x, const Design& design, const RegressionBasis& basis, const CovarianceKernel& kernel,
              const Criterion& criterion, const MomentOptions& options = {});
double b_fn(double x, const Design& design, const RegressionBasis& basis, const CovarianceKernel& kernel,
            const Criterion& criterion, const MomentOptions& options = {});
Vector g_fn(double x, const Design& design, const RegressionBasis& basis, const CovarianceKernel& kernel,
            const MomentOptions& options = {});
double r_fn(double x, const Design& design, const RegressionBasis& basis, const CovarianceKernel& kernel,
            const Criterion& criterion, const MomentOptions& options = {});

struct IdentityResiduals {
  double int_phi = 0;   // sum_i w_i phi(x_i)
  double int_b = 0;     // sum_i w_i b(x_i)
  double trace_DC = 0;  // tr(D C)
  double phi_vs_b = 0;      // |int_phi - int_b|
  double phi_vs_trace = 0;  // |int_phi - tr(DC)|
};

IdentityResiduals identity_check(const Design& design, const RegressionBasis& basis, const CovarianceKernel& kernel,
                                 const Criterion& criterion, const MomentOptions& options = {});
IdentityResiduals identity_check(const Sensitivity& s);

struct CheckVerdict {
  std::string name;
  bool pass = false;
  double value = 0;
  double tolerance = 0;
};

struct OptimalityReport {
  std::string criterion;
  Vector grid, phi, b, d, psi, r;
  Matrix g;  // grid.size() x m
  double scale = 0;               // max grid |b|
  double max_violation = 0;       // max over grid of (phi - b) / scale
  double max_relative_violation = 0;  // max off support of (phi - b) / |b|
  double support_deviation = 0;   // max over heavy atoms of |phi - b| / scale
  double orthogonality_residual = 0;  // |sum_i w_i g(x_i) f(x_i)^T| relative to |B|
  IdentityResiduals identity;
  std::vector<CheckVerdict> verdicts;
  bool pass() const;
};

// phi <= b on the grid and phi = b on atoms heavier than the weight floor,
// both up to tol * max|b|.
OptimalityReport necessary_condition_check(const Design& design, const RegressionBasis& basis,
                                           const CovarianceKernel& kernel, const Criterion& criterion,
                                           const Vector& grid, double tol = 1e-3,
                                           const MomentOptions& options = {}, double weight_floor = 1e-8);

// r_c >= 0 on the grid and r_c = 0 on heavy atoms, up to tol * max|b|.
OptimalityReport c_optimality_check(const Design& design, const RegressionBasis& basis,
                                    const CovarianceKernel& kernel, const Vector& c, const Vector& grid,
                                    double tol = 1e-3, const MomentOptions& options = {},
                                    double weight_floor = 1e-8);

enum class UniversalVerdict { Certified, NecessaryConsistent, Refuted };
std::string to_string(UniversalVerdict v);

struct UniversalReport {
  UniversalVerdict verdict = UniversalVerdict::Refuted;
  std::string reason;
  double scale = 0;     // max grid |k(x)|_inf
  double sup_g = 0;     // max over grid and support of |g(x)|_inf
  double max_sine = 0;  // largest sine of the angle between g and f
  double min_gamma = 0;
  double support_g = 0;  // max |g|_inf over heavy atoms
  double refuting_point = 0;
  Vector grid;
  Matrix g;
  Vector gamma;  // g = gamma f where g is not negligible, else 0
  Matrix Lambda;
  Vector Lambda_eigenvalues;
  double orthogonality_residual = 0;
};

UniversalReport universal_optimality_check(const Design& design, const RegressionBasis& basis,
                                           const CovarianceKernel& kernel, const Vector& grid, double tol = 1e-3,
                                           const MomentOptions& options = {}, double weight_floor = 1e-8);

// 2 [ int b(x, xi) nu(dx) - int phi(x, xi) nu(dx) ]
double directional_derivative(const Design& xi, const Design& nu, const RegressionBasis& basis,
                              const CovarianceKernel& kernel, const Criterion& criterion,
                              const MomentOptions& options = {});

// c = a/|a| - b/|b|; for linearly independent a, b it satisfies
// c^T a b^T c < 0.
Vector separating_direction(const Vector& a, const Vector& b);

}  // namespace corrdesign
