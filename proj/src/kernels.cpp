#include "corrdesign/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "corrdesign/quadrature.hpp"

namespace corrdesign {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogx(double y) { return y == 0.0 ? 0.0 : y * std::log(std::abs(y)); }

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void require_finite(double v, const char* name) {
  require(std::isfinite(v), std::string("kernel parameter ") + name + " must be finite");
}

const std::vector<std::pair<KernelFamily, const char*>>& family_names() {
  static const std::vector<std::pair<KernelFamily, const char*>> names = {
      {KernelFamily::Exponential, "exponential"},
      {KernelFamily::Gaussian, "gaussian"},
      {KernelFamily::Triangular, "triangular"},
      {KernelFamily::Spherical, "spherical"},
      {KernelFamily::PowerExp, "power_exp"},
      {KernelFamily::Logarithmic, "logarithmic"},
      {KernelFamily::PowerSingular, "power_singular"},
      {KernelFamily::PeriodicCosMix, "periodic_cos_mix"},
      {KernelFamily::SmoothedLog, "smoothed_log"},
      {KernelFamily::BrownianMin, "brownian_min"},
      {KernelFamily::Tabulated, "tabulated"}};
  return names;
}

// Antiderivative of -ln s^2.
double log_antiderivative(double s) { return -2.0 * (xlogx(s) - s); }

// Antiderivative of (h + |s|)^(-alpha), odd in s.
double power_antiderivative(double s, double alpha, double h) {
  double a = std::pow(h + std::abs(s), 1.0 - alpha) - std::pow(h, 1.0 - alpha);
  return std::copysign(a / (1.0 - alpha), s);
}

}  // namespace

std::string to_string(KernelFamily family) {
  for (const auto& [f, n] : family_names())
    if (f == family) return n;
  return "unknown";
}

KernelFamily kernel_family_from_string(const std::string& name) {
  for (const auto& [f, n] : family_names())
    if (name == n) return f;
  throw ConfigError("unknown kernel family '" + name + "'");
}

double smoothed_log(double delta, double t) {
  if (!(delta > 0.0)) throw ConfigError("smoothing half-width must be positive");
  return 2.0 - (xlogx(t + delta) - xlogx(t - delta)) / delta;
}

CovarianceKernel CovarianceKernel::exponential(double lambda) {
  require_finite(lambda, "lambda");
  require(lambda > 0, "exponential kernel needs lambda > 0");
  CovarianceKernel k;
  k.family_ = KernelFamily::Exponential;
  k.lambda_ = lambda;
  return k;
}

CovarianceKernel CovarianceKernel::gaussian(double lambda) {
  require_finite(lambda, "lambda");
  require(lambda > 0, "gaussian kernel needs lambda > 0");
  CovarianceKernel k;
  k.family_ = KernelFamily::Gaussian;
  k.lambda_ = lambda;
  return k;
}

CovarianceKernel CovarianceKernel::triangular(double lambda) {
  require_finite(lambda, "lambda");
  require(lambda > 0, "triangular kernel needs lambda > 0");
  CovarianceKernel k;
  k.family_ = KernelFamily::Triangular;
  k.lambda_ = lambda;
  return k;
}

CovarianceKernel CovarianceKernel::spherical(double range) {
  require_finite(range, "R");
  require(range > 0, "spherical kernel needs R > 0");
  CovarianceKernel k;
  k.family_ = KernelFamily::Spherical;
  k.range_ = range;
  return k;
}

CovarianceKernel CovarianceKernel::power_exponential(double lambda, double nu) {
  require_finite(lambda, "lambda");
  require_finite(nu, "nu");
  require(lambda > 0, "power-exponential kernel needs lambda > 0");
  require(nu > 0 && nu <= 2, "power-exponential kernel needs nu in (0, 2]");
  CovarianceKernel k;
  k.family_ = KernelFamily::PowerExp;
  k.lambda_ = lambda;
  k.nu_ = nu;
  return k;
}

CovarianceKernel CovarianceKernel::logarithmic(double beta, double gamma) {
  require_finite(beta, "beta");
  require_finite(gamma, "gamma");
  require(beta > 0, "logarithmic kernel needs beta > 0");
  require(gamma >= 0, "logarithmic kernel needs gamma >= 0");
  CovarianceKernel k;
  k.family_ = KernelFamily::Logarithmic;
  k.beta_ = beta;
  k.gamma_ = gamma;
  return k;
}

CovarianceKernel CovarianceKernel::power_singular(double alpha, double beta, double gamma,
                                                  double offset) {
  require_finite(alpha, "alpha");
  require_finite(beta, "beta");
  require_finite(gamma, "gamma");
  require_finite(offset, "h");
  require(alpha >= 0 && alpha < 1, "power kernel needs alpha in [0, 1)");
  require(beta > 0, "power kernel needs beta > 0");
  require(gamma >= 0, "power kernel needs gamma >= 0");
  require(offset >= 0, "power kernel needs offset h >= 0");
  CovarianceKernel k;
  k.family_ = KernelFamily::PowerSingular;
  k.alpha_ = alpha;
  k.beta_ = beta;
  k.gamma_ = gamma;
  k.offset_ = offset;
  return k;
}

CovarianceKernel CovarianceKernel::periodic_cos_mix(std::vector<CosineTerm> terms) {
  require(!terms.empty(), "periodic kernel needs at least one term");
  double total = 0.0;
  for (const auto& t : terms) {
    require_finite(t.weight, "c_k");
    require(t.weight >= 0, "periodic kernel weights must be nonnegative");
    require(t.frequency >= 0, "periodic kernel frequencies must be nonnegative");
    require(t.power >= 1, "periodic kernel powers must be positive integers");
    total += t.weight;
  }
  require(std::abs(total - 1.0) <= 1e-12, "periodic kernel weights must sum to 1");
  CovarianceKernel k;
  k.family_ = KernelFamily::PeriodicCosMix;
  k.terms_ = std::move(terms);
  return k;
}

CovarianceKernel CovarianceKernel::periodic_default() {
  return periodic_cos_mix({{0.5, 1, 1}, {0.5, 1, 2}});
}

CovarianceKernel CovarianceKernel::smoothed_log(double delta, double beta, double gamma) {
  require_finite(delta, "delta");
  require_finite(beta, "beta");
  require_finite(gamma, "gamma");
  require(delta > 0, "smoothed log kernel needs delta > 0");
  require(beta > 0, "smoothed log kernel needs beta > 0");
  require(gamma >= 0, "smoothed log kernel needs gamma >= 0");
  CovarianceKernel k;
  k.family_ = KernelFamily::SmoothedLog;
  k.delta_ = delta;
  k.beta_ = beta;
  k.gamma_ = gamma;
  return k;
}

CovarianceKernel CovarianceKernel::brownian_min() {
  CovarianceKernel k;
  k.family_ = KernelFamily::BrownianMin;
  return k;
}

CovarianceKernel CovarianceKernel::tabulated(Vector nodes, Matrix values) {
  const Index n = nodes.size();
  require(n >= 1, "tabulated kernel needs at least one node");
  require(values.rows() == n && values.cols() == n, "tabulated kernel table must be n x n");
  for (Index i = 1; i < n; ++i) require(nodes(i) > nodes(i - 1), "tabulated kernel nodes must ascend");
  require(values.allFinite(), "tabulated kernel values must be finite");
  require((values - values.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + values.cwiseAbs().maxCoeff()),
          "tabulated kernel table must be symmetric");
  CovarianceKernel k;
  k.family_ = KernelFamily::Tabulated;
  k.table_nodes_ = std::move(nodes);
  k.table_values_ = (values + values.transpose()) / 2.0;
  return k;
}

CovarianceKernel CovarianceKernel::tabulated_from_triples(const std::vector<std::array<double, 3>>& triples) {
  require(!triples.empty(), "tabulated kernel needs data");
  std::vector<double> nodes;
  for (const auto& t : triples) {
    nodes.push_back(t[0]);
    nodes.push_back(t[1]);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  const Index n = static_cast<Index>(nodes.size());
  Matrix sum = Matrix::Zero(n, n), count = Matrix::Zero(n, n);
  auto pos = [&](double x) {
    return static_cast<Index>(std::lower_bound(nodes.begin(), nodes.end(), x) - nodes.begin());
  };
  for (const auto& t : triples) {
    Index i = pos(t[0]), j = pos(t[1]);
    sum(i, j) += t[2];
    count(i, j) += 1;
  }
  Matrix values(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      double c = count(i, j) + count(j, i);
      if (c == 0)
        throw ConfigError("tabulated kernel is missing the pair (" + std::to_string(nodes[i]) + ", " +
                          std::to_string(nodes[j]) + ")");
      values(i, j) = (sum(i, j) + sum(j, i)) / c;
    }
  return tabulated(Eigen::Map<Vector>(nodes.data(), n), values);
}

CovarianceKernel CovarianceKernel::constant(double value) {
  require_finite(value, "value");
  return tabulated(Vector::Constant(1, 0.0), Matrix::Constant(1, 1, value));
}

CovarianceKernel CovarianceKernel::white_noise(const Vector& points, double sigma2) {
  require(sigma2 > 0, "white noise variance must be positive");
  std::vector<double> p(points.data(), points.data() + points.size());
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  const Index n = static_cast<Index>(p.size());
  return tabulated(Eigen::Map<Vector>(p.data(), n), sigma2 * Matrix::Identity(n, n));
}

bool CovarianceKernel::singular_on_diagonal() const {
  return family_ == KernelFamily::Logarithmic || (family_ == KernelFamily::PowerSingular && offset_ == 0.0);
}

bool CovarianceKernel::stationary() const {
  return family_ != KernelFamily::BrownianMin && family_ != KernelFamily::Tabulated;
}

std::map<std::string, double> CovarianceKernel::params() const {
  std::map<std::string, double> p;
  switch (family_) {
    case KernelFamily::Exponential:
    case KernelFamily::Gaussian:
    case KernelFamily::Triangular:
      p["lambda"] = lambda_;
      break;
    case KernelFamily::Spherical:
      p["R"] = range_;
      break;
    case KernelFamily::PowerExp:
      p["lambda"] = lambda_;
      p["nu"] = nu_;
      break;
    case KernelFamily::Logarithmic:
      p["beta"] = beta_;
      p["gamma"] = gamma_;
      break;
    case KernelFamily::PowerSingular:
      p["alpha"] = alpha_;
      p["beta"] = beta_;
      p["gamma"] = gamma_;
      p["h"] = offset_;
      break;
    case KernelFamily::SmoothedLog:
      p["delta"] = delta_;
      p["beta"] = beta_;
      p["gamma"] = gamma_;
      break;
    case KernelFamily::PeriodicCosMix:
      for (std::size_t i = 0; i < terms_.size(); ++i) p["c" + std::to_string(i + 1)] = terms_[i].weight;
      break;
    case KernelFamily::BrownianMin:
    case KernelFamily::Tabulated:
      break;
  }
  if (scale_ != 1.0) p["scale"] = scale_;
  return p;
}

double CovarianceKernel::at_lag(double t) const {
  if (!stationary()) throw ConfigError(to_string(family_) + " kernel is not stationary");
  return scale_ * base(0.0, std::abs(t));
}

double CovarianceKernel::operator()(double u, double v) const {
  // Evaluating on the ordered pair makes the result exactly symmetric.
  return scale_ * base(std::min(u, v), std::max(u, v));
}

double CovarianceKernel::base(double a, double b) const {
  const double t = b - a;
  switch (family_) {
    case KernelFamily::Exponential:
      return std::exp(-lambda_ * t);
    case KernelFamily::Gaussian:
      return std::exp(-lambda_ * t * t);
    case KernelFamily::Triangular:
      return std::max(0.0, 1.0 - lambda_ * t);
    case KernelFamily::Spherical: {
      if (t >= range_) return 0.0;
      double s = t / range_;
      return 1.0 - 1.5 * s + 0.5 * s * s * s;
    }
    case KernelFamily::PowerExp:
      return std::exp(-lambda_ * std::pow(t, nu_));
    case KernelFamily::Logarithmic:
      if (t == 0.0) return kInf;
      return gamma_ - 2.0 * beta_ * std::log(t);
    case KernelFamily::PowerSingular:
      if (t == 0.0 && offset_ == 0.0) return kInf;
      return gamma_ + beta_ * std::pow(offset_ + t, -alpha_);
    case KernelFamily::PeriodicCosMix: {
      const double r = t - std::floor(t);
      double s = 0.0;
      for (const auto& term : terms_) {
        const double c = std::cos(2.0 * std::numbers::pi * term.frequency * r);
        s += term.weight * std::pow(c, term.power);
      }
      return s;
    }
    case KernelFamily::SmoothedLog:
      return gamma_ + beta_ * corrdesign::smoothed_log(delta_, t);
    case KernelFamily::BrownianMin:
      return a;
    case KernelFamily::Tabulated: {
      const Vector& x = table_nodes_;
      const Index n = x.size();
      if (n == 1) return table_values_(0, 0);
      auto locate = [&](double p, Index& i, double& f) {
        if (p <= x(0)) {
          i = 0;
          f = 0.0;
        } else if (p >= x(n - 1)) {
          i = n - 2;
          f = 1.0;
        } else {
          i = static_cast<Index>(std::upper_bound(x.data(), x.data() + n, p) - x.data()) - 1;
          f = (p - x(i)) / (x(i + 1) - x(i));
        }
      };
      Index i, j;
      double fa, fb;
      locate(a, i, fa);
      locate(b, j, fb);
      const Matrix& T = table_values_;
      return (1 - fa) * (1 - fb) * T(i, j) + fa * (1 - fb) * T(i + 1, j) + (1 - fa) * fb * T(i, j + 1) +
             fa * fb * T(i + 1, j + 1);
    }
  }
  return 0.0;
}

CovarianceKernel CovarianceKernel::scaled(double s) const {
  require(s > 0 && std::isfinite(s), "kernel scale must be positive");
  CovarianceKernel k = *this;
  k.scale_ *= s;
  return k;
}

CovarianceKernel CovarianceKernel::smoothed(double halfwidth) const {
  if (!(halfwidth > 0)) throw ConfigError("smoothing half-width must be positive");
  CovarianceKernel k = *this;
  if (family_ == KernelFamily::Logarithmic) {
    k.family_ = KernelFamily::SmoothedLog;
    k.delta_ = halfwidth;
  } else if (family_ == KernelFamily::PowerSingular && offset_ == 0.0) {
    k.offset_ = halfwidth;
  }
  return k;
}

double CovarianceKernel::cell_mean(double x, double lo, double hi) const {
  if (!(hi > lo)) throw ConfigError("cell must have positive width");
  const double w = hi - lo;
  if (family_ == KernelFamily::Logarithmic)
    return scale_ * (gamma_ + beta_ * (log_antiderivative(hi - x) - log_antiderivative(lo - x)) / w);
  if (family_ == KernelFamily::PowerSingular)
    return scale_ * (gamma_ + beta_ *
                                  (power_antiderivative(hi - x, alpha_, offset_) -
                                   power_antiderivative(lo - x, alpha_, offset_)) /
                                  w);
  // Smooth families: Gauss-Legendre on each side of x, where the kink sits.
  std::vector<double> cuts{lo};
  if (x > lo && x < hi) cuts.push_back(x);
  cuts.push_back(hi);
  double total = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    QuadratureRule r = gauss_legendre(32, cuts[c], cuts[c + 1]);
    for (Index i = 0; i < r.nodes.size(); ++i) total += r.weights(i) * (*this)(x, r.nodes(i));
  }
  return total / w;
}

double CovarianceKernel::cell_square_mean(double lo, double hi) const {
  if (!(hi > lo)) throw ConfigError("cell must have positive width");
  const double w = hi - lo;
  if (family_ == KernelFamily::Logarithmic) return scale_ * (gamma_ + beta_ * (3.0 - 2.0 * std::log(w)));
  if (family_ == KernelFamily::PowerSingular) {
    const double a = alpha_, h = offset_, s = h + w;
    const double integral = (w + h) * (std::pow(s, 1 - a) - std::pow(h, 1 - a)) / (1 - a) -
                            (std::pow(s, 2 - a) - std::pow(h, 2 - a)) / (2 - a);
    return scale_ * (gamma_ + beta_ * 2.0 * integral / (w * w));
  }
  QuadratureRule r = gauss_legendre(32, lo, hi);
  double total = 0.0;
  for (Index i = 0; i < r.nodes.size(); ++i) total += r.weights(i) * cell_mean(r.nodes(i), lo, hi);
  return total / w;
}

std::string CovarianceKernel::describe() const {
  std::ostringstream os;
  os << to_string(family_);
  bool first = true;
  for (const auto& [k, v] : params()) {
    os << (first ? "(" : ", ") << k << "=" << v;
    first = false;
  }
  if (!first) os << ")";
  return os.str();
}

Matrix gram_matrix(const CovarianceKernel& kernel, const Vector& x, const Vector& y) {
  Matrix G(x.size(), y.size());
  for (Index i = 0; i < x.size(); ++i)
    for (Index j = 0; j < y.size(); ++j) {
      double v = kernel(x(i), y(j));
      if (!std::isfinite(v))
        throw SingularDiagonalError("singular kernel evaluated at coinciding points " + std::to_string(x(i)));
      G(i, j) = v;
    }
  return G;
}

Matrix gram_matrix(const CovarianceKernel& kernel, const Vector& x) {
  Matrix G = gram_matrix(kernel, x, x);
  return (G + G.transpose()) / 2.0;
}

double half_min_gap(const Vector& points) {
  std::vector<double> p(points.data(), points.data() + points.size());
  std::sort(p.begin(), p.end());
  double gap = kInf;
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i] > p[i - 1]) gap = std::min(gap, p[i] - p[i - 1]);
  if (!std::isfinite(gap)) throw NumericalError("smoothing needs at least two distinct points");
  return 0.5 * gap;
}

PsdReport psd_diagnostic(const CovarianceKernel& kernel, const Vector& grid, Smoothing smoothing) {
  if (grid.size() < 2) throw ConfigError("PSD diagnostic needs at least two grid points");
  PsdReport report;
  CovarianceKernel k = kernel;
  if (kernel.singular_on_diagonal()) {
    switch (smoothing.mode) {
      case Smoothing::Mode::None:
        throw SmoothingRequiredError("singular kernel " + kernel.describe() +
                                     " needs a smoothing half-width for a Gram matrix");
      case Smoothing::Mode::HalfSpacing:
        report.smoothing_halfwidth = half_min_gap(grid);
        break;
      case Smoothing::Mode::Fixed:
        report.smoothing_halfwidth = smoothing.halfwidth;
        break;
    }
    k = kernel.smoothed(report.smoothing_halfwidth);
  }
  Matrix G = gram_matrix(k, grid);
  Eigen::SelfAdjointEigenSolver<Matrix> es(G, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = es.eigenvalues().minCoeff();
  report.trace = G.trace();
  report.threshold = -1e-8 * std::abs(report.trace);
  report.pass = report.min_eigenvalue >= report.threshold;
  return report;
}

double kernel_quadratic_form(const Matrix& gram, const Vector& v) { return v.dot(gram * v); }

}  // namespace corrdesign
