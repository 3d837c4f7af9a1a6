#include "corrdesign/optimality.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace corrdesign {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double orthogonality(const Sensitivity& s) {
  const Design& d = s.design();
  const int m = s.basis().size();
  Matrix acc = Matrix::Zero(m, m);
  for (Index i = 0; i < d.size(); ++i) acc += d.weights()(i) * s.g(d.support()(i)) * s.basis()(d.support()(i)).transpose();
  const double ref = s.moments().B.cwiseAbs().maxCoeff();
  return acc.cwiseAbs().maxCoeff() / (ref > 0 ? ref : 1.0);
}

}  // namespace

Criterion Criterion::c_optimal(Vector c) {
  if (c.size() == 0 || c.norm() == 0) throw ConfigError("c-criterion needs a nonzero vector c");
  Criterion k;
  k.kind = Kind::C;
  k.c = std::move(c);
  return k;
}

Matrix Criterion::derivative(const Matrix& D) const {
  if (kind == Kind::D) return spd_inverse(D, 1e14, "covariance matrix D");
  if (c.size() != D.rows()) throw ConfigError("c-criterion vector length differs from the number of parameters");
  return c * c.transpose();
}

double Criterion::value(const Matrix& D) const {
  if (kind == Kind::D) return spd_logdet(D);
  if (c.size() != D.rows()) throw ConfigError("c-criterion vector length differs from the number of parameters");
  return c.dot(D * c);
}

std::string Criterion::describe() const {
  if (kind == Kind::D) return "D";
  std::ostringstream os;
  os << "c(";
  for (Index i = 0; i < c.size(); ++i) os << (i ? "," : "") << c(i);
  os << ")";
  return os.str();
}

Sensitivity::Sensitivity(const Design& design, const RegressionBasis& basis, const CovarianceKernel& kernel,
                         const Criterion& criterion, const MomentOptions& options)
    : design_(design),
      basis_(basis),
      criterion_(criterion),
      moments_(cov_matrix(design, basis, kernel, options)),
      resolved_(kernel, design_, options) {
  C_ = criterion.derivative(moments_.D);
  weighted_F_ = design.weights().asDiagonal() * basis.design_matrix(design.support());
  phi_form_ = moments_.D * C_ * moments_.M_inv;
  b_form_ = moments_.M_inv * C_ * moments_.M_inv;
}

Vector Sensitivity::kernel_moment(double x) const { return weighted_F_.transpose() * resolved_.column(x); }

Sensitivity::Point Sensitivity::at(double x) const {
  Point p;
  Vector f = basis_(x);
  Vector k = kernel_moment(x);
  p.admissible = f.cwiseAbs().maxCoeff() > 0.0;
  p.phi = f.dot(phi_form_ * f);
  p.b = f.dot(b_form_ * k);
  p.d = f.dot(moments_.M_inv * f);
  p.g = k - moments_.Lambda * f;
  p.r = f.dot(b_form_ * p.g);
  p.psi = p.admissible && p.b != 0.0 ? p.phi / p.b : kNaN;
  return p;
}

double Sensitivity::phi(double x) const {
  Vector f = basis_(x);
  return f.dot(phi_form_ * f);
}

double Sensitivity::b(double x) const { return basis_(x).dot(b_form_ * kernel_moment(x)); }

double Sensitivity::b_dform(double x) const {
  Eigen::LDLT<Matrix> ldlt(moments_.B);
  return basis_(x).dot(ldlt.solve(kernel_moment(x)));
}

double Sensitivity::d(double x) const {
  Vector f = basis_(x);
  return f.dot(moments_.M_inv * f);
}

Vector Sensitivity::g(double x) const { return kernel_moment(x) - moments_.Lambda * basis_(x); }

double Sensitivity::r(double x) const { return basis_(x).dot(b_form_ * g(x)); }

double Sensitivity::psi(double x) const { return at(x).psi; }

double phi_fn(double x, const Design& design, const RegressionBasis& basis, const CovarianceKernel& kernel,
              const Criterion& criterion, const MomentOptions& options) {
  return Sensitivity(design, basis, kernel, criterion, options).phi(x);
}

double b_fn(double x, const Design& design, const RegressionBasis& basis, const CovarianceKernel& kernel,
            const Criterion& criterion, const MomentOptions& options) {
  return Sensitivity(design, basis, kernel, criterion, options).b(x);
}

Vector g_fn(double x, const Design& design, const RegressionBasis& basis, const CovarianceKernel& kernel,
            const MomentOptions& options) {
  return Sensitivity(design, basis, kernel, Criterion::d_optimal(), options).g(x);
}

double r_fn(double x, const Design& design, const RegressionBasis& basis, const CovarianceKernel& kernel,
            const Criterion& criterion, const MomentOptions& options) {
  return Sensitivity(design, basis, kernel, criterion, options).r(x);
}

IdentityResiduals identity_check(const Sensitivity& s) {
  IdentityResiduals res;
  const Design& d = s.design();
  for (Index i = 0; i < d.size(); ++i) {
    Sensitivity::Point p = s.at(d.support()(i));
    res.int_phi += d.weights()(i) * p.phi;
    res.int_b += d.weights()(i) * p.b;
  }
  res.trace_DC = s.trace_DC();
  res.phi_vs_b = std::abs(res.int_phi - res.int_b);
  res.phi_vs_trace = std::abs(res.int_phi - res.trace_DC);
  return res;
}

IdentityResiduals identity_check(const Design& design, const RegressionBasis& basis, const CovarianceKernel& kernel,
                                 const Criterion& criterion, const MomentOptions& options) {
  return identity_check(Sensitivity(design, basis, kernel, criterion, options));
}

bool OptimalityReport::pass() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

namespace {

OptimalityReport sample(const Sensitivity& s, const Vector& grid) {
  OptimalityReport rep;
  const Index n = grid.size();
  const int m = s.basis().size();
  rep.criterion = s.criterion().describe();
  rep.grid = grid;
  rep.phi.resize(n);
  rep.b.resize(n);
  rep.d.resize(n);
  rep.psi.resize(n);
  rep.r.resize(n);
  rep.g.resize(n, m);
  for (Index i = 0; i < n; ++i) {
    Sensitivity::Point p = s.at(grid(i));
    rep.phi(i) = p.phi;
    rep.b(i) = p.b;
    rep.d(i) = s.criterion().kind == Criterion::Kind::D ? p.d : kNaN;
    rep.psi(i) = p.psi;
    rep.r(i) = p.r;
    rep.g.row(i) = p.g.transpose();
  }
  rep.scale = rep.b.cwiseAbs().maxCoeff();
  if (!(rep.scale > 0)) rep.scale = 1.0;
  rep.identity = identity_check(s);
  rep.orthogonality_residual = orthogonality(s);
  return rep;
}

// Maximum of |value(x_i)| / scale over atoms heavier than the floor.
template <typename F>
double support_max(const Sensitivity& s, double floor, double scale, F value) {
  double worst = 0.0;
  const Design& d = s.design();
  for (Index i = 0; i < d.size(); ++i)
    if (d.weights()(i) > floor) worst = std::max(worst, std::abs(value(d.support()(i))) / scale);
  return worst;
}

}  // namespace

OptimalityReport necessary_condition_check(const Design& design, const RegressionBasis& basis,
                                           const CovarianceKernel& kernel, const Criterion& criterion,
                                           const Vector& grid, double tol, const MomentOptions& options,
                                           double weight_floor) {
  Sensitivity s(design, basis, kernel, criterion, options);
  OptimalityReport rep = sample(s, grid);
  rep.max_violation = -std::numeric_limits<double>::infinity();
  rep.max_relative_violation = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < grid.size(); ++i) {
    if (!basis.admissible(grid(i))) continue;
    const double diff = rep.phi(i) - rep.b(i);
    rep.max_violation = std::max(rep.max_violation, diff / rep.scale);
    const Index atom = design.atom_at(grid(i));
    const bool on_support = atom >= 0 && design.weights()(atom) > weight_floor;
    if (!on_support && rep.b(i) != 0.0)
      rep.max_relative_violation = std::max(rep.max_relative_violation, diff / std::abs(rep.b(i)));
  }
  rep.support_deviation = support_max(s, weight_floor, rep.scale, [&](double x) {
    Sensitivity::Point p = s.at(x);
    return p.phi - p.b;
  });
  rep.verdicts.push_back({"phi <= b on grid", rep.max_violation <= tol, rep.max_violation, tol});
  rep.verdicts.push_back({"phi = b on support", rep.support_deviation <= tol, rep.support_deviation, tol});
  return rep;
}

OptimalityReport c_optimality_check(const Design& design, const RegressionBasis& basis,
                                    const CovarianceKernel& kernel, const Vector& c, const Vector& grid, double tol,
                                    const MomentOptions& options, double weight_floor) {
  Sensitivity s(design, basis, kernel, Criterion::c_optimal(c), options);
  OptimalityReport rep = sample(s, grid);
  double worst = 0.0;
  for (Index i = 0; i < grid.size(); ++i)
    if (basis.admissible(grid(i))) worst = std::max(worst, -rep.r(i) / rep.scale);
  rep.max_violation = worst;
  rep.support_deviation = support_max(s, weight_floor, rep.scale, [&](double x) { return s.r(x); });
  rep.verdicts.push_back({"r_c >= 0 on grid", worst <= tol, worst, tol});
  rep.verdicts.push_back({"r_c = 0 on support", rep.support_deviation <= tol, rep.support_deviation, tol});
  return rep;
}

std::string to_string(UniversalVerdict v) {
  switch (v) {
    case UniversalVerdict::Certified:
      return "CERTIFIED";
    case UniversalVerdict::NecessaryConsistent:
      return "NECESSARY-CONSISTENT";
    case UniversalVerdict::Refuted:
      return "REFUTED";
  }
  return "UNKNOWN";
}

UniversalReport universal_optimality_check(const Design& design, const RegressionBasis& basis,
                                           const CovarianceKernel& kernel, const Vector& grid, double tol,
                                           const MomentOptions& options, double weight_floor) {
  Sensitivity s(design, basis, kernel, Criterion::d_optimal(), options);
  UniversalReport rep;
  const Index n = grid.size();
  const int m = basis.size();
  rep.grid = grid;
  rep.g.resize(n, m);
  rep.gamma = Vector::Zero(n);
  rep.Lambda = s.moments().Lambda;
  rep.Lambda_eigenvalues = Eigen::EigenSolver<Matrix>(rep.Lambda, false).eigenvalues().real();
  std::sort(rep.Lambda_eigenvalues.data(), rep.Lambda_eigenvalues.data() + m);
  rep.orthogonality_residual = orthogonality(s);

  double scale = 0.0;
  std::vector<Vector> fs(n);
  for (Index i = 0; i < n; ++i) {
    Vector k = s.kernel_moment(grid(i));
    fs[i] = basis(grid(i));
    scale = std::max(scale, k.cwiseAbs().maxCoeff());
    rep.g.row(i) = (k - s.moments().Lambda * fs[i]).transpose();
  }
  rep.scale = scale > 0 ? scale : 1.0;
  const double threshold = tol * rep.scale;
  rep.sup_g = n ? rep.g.cwiseAbs().maxCoeff() : 0.0;
  for (Index i = 0; i < design.size(); ++i)
    if (design.weights()(i) > weight_floor)
      rep.support_g = std::max(rep.support_g, s.g(design.support()(i)).cwiseAbs().maxCoeff());
  rep.sup_g = std::max(rep.sup_g, rep.support_g);

  if (rep.sup_g <= threshold) {
    rep.verdict = UniversalVerdict::Certified;
    rep.reason = "g vanishes on the grid";
    return rep;
  }
  rep.verdict = UniversalVerdict::NecessaryConsistent;
  rep.reason = "g is a nonnegative multiple of f vanishing on the support";
  auto refute = [&](double x, const std::string& why) {
    if (rep.verdict == UniversalVerdict::Refuted) return;
    rep.verdict = UniversalVerdict::Refuted;
    rep.refuting_point = x;
    rep.reason = why;
  };
  for (Index i = 0; i < n; ++i) {
    const Vector gi = rep.g.row(i).transpose();
    const Vector& f = fs[i];
    const double fnorm2 = f.squaredNorm();
    if (fnorm2 == 0.0 || gi.cwiseAbs().maxCoeff() <= threshold) continue;
    const double gamma = gi.dot(f) / fnorm2;
    const double sine = (gi - gamma * f).norm() / gi.norm();
    rep.max_sine = std::max(rep.max_sine, sine);
    rep.gamma(i) = gamma;
    rep.min_gamma = std::min(rep.min_gamma, gamma);
    if (sine > tol) refute(grid(i), "g is not proportional to f");
    else if (gamma * f.cwiseAbs().maxCoeff() < -threshold) refute(grid(i), "g = gamma f with gamma < 0");
  }
  if (rep.support_g > threshold) refute(0.0, "g does not vanish on the support");
  return rep;
}

double directional_derivative(const Design& xi, const Design& nu, const RegressionBasis& basis,
                              const CovarianceKernel& kernel, const Criterion& criterion,
                              const MomentOptions& options) {
  Sensitivity s(xi, basis, kernel, criterion, options);
  double total = 0.0;
  for (Index j = 0; j < nu.size(); ++j) {
    Sensitivity::Point p = s.at(nu.support()(j));
    total += nu.weights()(j) * (p.b - p.phi);
  }
  return 2.0 * total;
}

Vector separating_direction(const Vector& a, const Vector& b) {
  if (a.size() != b.size() || a.norm() == 0 || b.norm() == 0)
    throw ConfigError("separating direction needs two nonzero vectors of equal length");
  Vector c = a / a.norm() - b / b.norm();
  if (c.norm() <= 1e-12) throw ConfigError("separating direction needs linearly independent vectors");
  return c;
}

}  // namespace corrdesign
