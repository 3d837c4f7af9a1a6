#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "corrdesign/linalg.hpp"

namespace corrdesign {

enum class KernelFamily {
  Exponential,
  Gaussian,
  Triangular,
  Spherical,
  PowerExp,
  Logarithmic,
  PowerSingular,
  PeriodicCosMix,
  SmoothedLog,
  BrownianMin,
  Tabulated
};

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

// One term c * cos(2 pi k t)^p of a periodic cosine mixture.
struct CosineTerm {
  double weight = 1.0;
  int frequency = 1;
  int power = 1;
};

// rho_delta(t): the log kernel -ln t^2 averaged over a window of half-width
// delta. Finite everywhere, with 0 log 0 = 0.
double smoothed_log(double delta, double t);

// Covariance kernel K(u, v) on an interval. Immutable after construction;
// parameters are validated by the factories.
class CovarianceKernel {
 public:
  static CovarianceKernel exponential(double lambda);
  // exp(-lambda t^2)
  static CovarianceKernel gaussian(double lambda);
  // max(0, 1 - lambda |t|)
  static CovarianceKernel triangular(double lambda);
  static CovarianceKernel spherical(double range);
  // exp(-lambda |t|^nu)
  static CovarianceKernel power_exponential(double lambda, double nu);
  // gamma - beta ln (u - v)^2
  static CovarianceKernel logarithmic(double beta = 1.0, double gamma = 0.0);
  // gamma + beta / (h + |u - v|)^alpha; singular when h = 0.
  static CovarianceKernel power_singular(double alpha, double beta = 1.0, double gamma = 0.0,
                                         double offset = 0.0);
  static CovarianceKernel periodic_cos_mix(std::vector<CosineTerm> terms);
  // Equal mixture of cos(2 pi t) and cos^2(2 pi t).
  static CovarianceKernel periodic_default();
  // gamma + beta rho_delta(u - v)
  static CovarianceKernel smoothed_log(double delta, double beta = 1.0, double gamma = 0.0);
  // min(u, v) on [0, 1]
  static CovarianceKernel brownian_min();
  // Bilinear interpolation of a symmetric table on ascending nodes.
  static CovarianceKernel tabulated(Vector nodes, Matrix values);
  // Table from (u, v, K) triples; pairs given once are mirrored, pairs given
  // twice are averaged.
  static CovarianceKernel tabulated_from_triples(const std::vector<std::array<double, 3>>& triples);
  static CovarianceKernel constant(double value);
  // Diagonal sigma2 at the given points, zero between distinct points.
  static CovarianceKernel white_noise(const Vector& points, double sigma2);

  double operator()(double u, double v) const;
  // Value as a function of the lag |u - v| (stationary families only).
  double at_lag(double t) const;

  KernelFamily family() const { return family_; }
  std::map<std::string, double> params() const;
  const std::vector<CosineTerm>& terms() const { return terms_; }
  bool singular_on_diagonal() const;
  bool stationary() const;
  bool periodic() const { return family_ == KernelFamily::PeriodicCosMix; }
  double period() const { return periodic() ? 1.0 : 0.0; }
  const Vector& table_nodes() const { return table_nodes_; }
  const Matrix& table_values() const { return table_values_; }

  // The kernel multiplied by s > 0.
  CovarianceKernel scaled(double s) const;
  // Non-singular approximant with smoothing half-width h: SmoothedLog for the
  // log kernel and 1/(h + |t|)^alpha for the power kernel. Other families are
  // returned unchanged.
  CovarianceKernel smoothed(double halfwidth) const;

  // Mean of K(x, u) over u in [lo, hi].
  double cell_mean(double x, double lo, double hi) const;
  // Mean of K(u, v) over the square [lo, hi]^2.
  double cell_square_mean(double lo, double hi) const;

  std::string describe() const;

 private:
  CovarianceKernel() = default;
  double base(double a, double b) const;

  KernelFamily family_ = KernelFamily::Exponential;
  double lambda_ = 1.0, range_ = 1.0, alpha_ = 0.0, beta_ = 1.0, gamma_ = 0.0, nu_ = 1.0,
         delta_ = 0.0, offset_ = 0.0, scale_ = 1.0;
  std::vector<CosineTerm> terms_;
  Vector table_nodes_;
  Matrix table_values_;
};

// Gram matrix [K(x_i, y_j)]. Coincident points of a singular kernel raise
// SingularDiagonalError.
Matrix gram_matrix(const CovarianceKernel& kernel, const Vector& x, const Vector& y);
Matrix gram_matrix(const CovarianceKernel& kernel, const Vector& x);

struct Smoothing {
  enum class Mode { None, HalfSpacing, Fixed };
  Mode mode = Mode::HalfSpacing;
  double halfwidth = 0.0;
  static Smoothing none() { return {Mode::None, 0.0}; }
  static Smoothing half_spacing() { return {Mode::HalfSpacing, 0.0}; }
  static Smoothing fixed(double h) { return {Mode::Fixed, h}; }
};

struct PsdReport {
  double min_eigenvalue = 0.0;
  double trace = 0.0;
  double threshold = 0.0;  // -1e-8 * trace
  double smoothing_halfwidth = 0.0;
  bool pass = false;
};

// Smallest eigenvalue of the Gram matrix on `grid`. Singular kernels are
// replaced by their smoothed approximant; Smoothing::none() makes that an
// error.
PsdReport psd_diagnostic(const CovarianceKernel& kernel, const Vector& grid,
                         Smoothing smoothing = Smoothing::half_spacing());

// Quadratic form sum_ij v_i v_j K(x_i, x_j).
double kernel_quadratic_form(const Matrix& gram, const Vector& v);

// Half of the smallest gap between distinct sorted points.
double half_min_gap(const Vector& points);

}  // namespace corrdesign
