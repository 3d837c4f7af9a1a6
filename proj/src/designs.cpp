#include "corrdesign/designs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "corrdesign/quadrature.hpp"

namespace corrdesign {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

bool coincide(double a, double b) { return std::abs(a - b) <= 1e-14 * (1.0 + std::abs(a) + std::abs(b)); }

Vector normalized(const Vector& w) {
  require(w.allFinite(), "design weights must be finite");
  require((w.array() >= 0).all(), "design weights must be nonnegative");
  const double total = w.sum();
  require(total > 0, "design weights must not all vanish");
  return w / total;
}

}  // namespace

Design::Design(const Vector& support, const Vector& weights) {
  require(support.size() >= 1, "design needs at least one point");
  require(support.size() == weights.size(), "design support and weights differ in length");
  require(support.allFinite(), "design support must be finite");
  Vector w = normalized(weights);
  std::vector<Index> order(support.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return support(a) < support(b); });
  std::vector<double> xs, ws;
  for (Index k : order) {
    if (!xs.empty() && coincide(xs.back(), support(k))) {
      ws.back() += w(k);
    } else {
      xs.push_back(support(k));
      ws.push_back(w(k));
    }
  }
  support_ = Eigen::Map<Vector>(xs.data(), static_cast<Index>(xs.size()));
  weights_ = normalized(Eigen::Map<Vector>(ws.data(), static_cast<Index>(ws.size())));
  set_voronoi_edges();
}

Design::Design(const Vector& support, const Vector& weights, const Vector& cell_edges) {
  const Index n = support.size();
  require(n >= 1, "design needs at least one point");
  require(weights.size() == n, "design support and weights differ in length");
  require(cell_edges.size() == n + 1, "design needs one more cell edge than atoms");
  for (Index i = 0; i < n; ++i) {
    if (i > 0) require(support(i) > support(i - 1), "explicit-cell designs need increasing support");
    require(cell_edges(i) < cell_edges(i + 1), "cell edges must increase");
    require(cell_edges(i) <= support(i) && support(i) <= cell_edges(i + 1), "every atom must lie in its cell");
  }
  support_ = support;
  weights_ = normalized(weights);
  edges_ = cell_edges;
  explicit_cells_ = true;
}

void Design::set_voronoi_edges() {
  const Index n = support_.size();
  edges_.resize(n + 1);
  if (n == 1) {
    edges_(0) = edges_(1) = support_(0);
    return;
  }
  for (Index i = 1; i < n; ++i) edges_(i) = 0.5 * (support_(i - 1) + support_(i));
  edges_(0) = support_(0) - (edges_(1) - support_(0));
  edges_(n) = support_(n - 1) + (support_(n - 1) - edges_(n - 1));
  explicit_cells_ = false;
}

Design Design::point_mass(double x) { return Design(Vector::Constant(1, x), Vector::Ones(1)); }

Design Design::equal_weights(const Vector& points) {
  return Design(points, Vector::Constant(points.size(), 1.0 / points.size()));
}

double Design::min_gap() const {
  if (size() < 2) return 0.0;
  return (support_.tail(size() - 1) - support_.head(size() - 1)).minCoeff();
}

Index Design::cell_of(double x) const {
  if (size() < 2 || x < edges_(0) || x > edges_(size())) return -1;
  Index i = static_cast<Index>(std::upper_bound(edges_.data(), edges_.data() + edges_.size(), x) - edges_.data()) - 1;
  return std::clamp<Index>(i, 0, size() - 1);
}

Index Design::atom_at(double x) const {
  auto it = std::lower_bound(support_.data(), support_.data() + size(), x);
  Index i = static_cast<Index>(it - support_.data());
  if (i < size() && support_(i) == x) return i;
  return -1;
}

Design Design::pruned(double floor) const {
  std::vector<double> xs, ws;
  for (Index i = 0; i < size(); ++i)
    if (weights_(i) >= floor) {
      xs.push_back(support_(i));
      ws.push_back(weights_(i));
    }
  if (xs.empty()) throw NumericalError("pruning removed every atom of the design");
  const Index n = static_cast<Index>(xs.size());
  return Design(Eigen::Map<Vector>(xs.data(), n), Eigen::Map<Vector>(ws.data(), n));
}

Design Design::with_weights(const Vector& weights) const {
  require(weights.size() == size(), "new weights must match the support");
  Design d = *this;
  d.weights_ = normalized(weights);
  d.density_.reset();
  return d;
}

Design Design::with_density(const DensityDesign& dd) const {
  require(explicit_cells_, "a density can only be attached to a design with explicit cells");
  Design d = *this;
  d.density_ = std::make_shared<const DensityDesign>(dd);
  return d;
}

Design mixture(const Design& a, const Design& b, double alpha) {
  require(alpha >= 0 && alpha <= 1, "mixture weight must lie in [0, 1]");
  Vector x(a.size() + b.size()), w(a.size() + b.size());
  x << a.support(), b.support();
  w << (1 - alpha) * a.weights(), alpha * b.weights();
  return Design(x, w);
}

DensityDesign uniform_density(Interval interval) {
  require(interval.hi > interval.lo, "uniform density needs a proper interval");
  const double lo = interval.lo, len = interval.length();
  DensityDesign dd;
  dd.name = "uniform";
  dd.interval = interval;
  dd.density = [len](double) { return 1.0 / len; };
  dd.cdf = [lo, len](double x) { return std::clamp((x - lo) / len, 0.0, 1.0); };
  dd.quantile = [lo, len](double s) { return lo + std::clamp(s, 0.0, 1.0) * len; };
  dd.density_from_ends = [len](double, double) { return 1.0 / len; };
  return dd;
}

DensityDesign arcsine_design() {
  const double pi = std::numbers::pi;
  DensityDesign dd;
  dd.name = "arcsine";
  dd.interval = {-1.0, 1.0};
  dd.density = [pi](double x) { return 1.0 / (pi * std::sqrt((1.0 - x) * (1.0 + x))); };
  dd.cdf = [pi](double x) { return 1.0 - std::acos(std::clamp(x, -1.0, 1.0)) / pi; };
  dd.quantile = [pi](double s) { return -std::cos(pi * std::clamp(s, 0.0, 1.0)); };
  dd.density_from_ends = [pi](double d_lo, double d_hi) { return 1.0 / (pi * std::sqrt(d_lo * d_hi)); };
  return dd;
}

double generalized_arcsine_constant(double alpha) {
  return std::tgamma(0.5 * alpha + 1.0) / (std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (alpha + 1.0)));
}

DensityDesign generalized_arcsine_design(double alpha) {
  require(std::isfinite(alpha) && alpha > 0 && alpha < 1, "generalized arcsine needs alpha in (0, 1)");
  const double c = generalized_arcsine_constant(alpha);
  const double e = 0.5 * (alpha - 1.0);
  DensityDesign dd;
  dd.name = "gen_arcsine";
  dd.parameter = alpha;
  dd.interval = {-1.0, 1.0};
  dd.density = [c, e](double x) { return c * std::pow((1.0 - x) * (1.0 + x), e); };
  dd.density_from_ends = [c, e](double d_lo, double d_hi) { return c * std::pow(d_lo * d_hi, e); };
  // With x = -cos(theta) the mass below x is c * int_0^theta sin^alpha.
  auto cdf = [c, alpha](double x) {
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double theta = std::acos(-x);
    auto f = [alpha](double t, double d_lo, double) { return std::pow(std::sin(t < 1.0 ? d_lo : t), alpha); };
    return std::clamp(c * tanh_sinh(f, 0.0, theta, 96).value, 0.0, 1.0);
  };
  dd.cdf = cdf;
  dd.quantile = [cdf](double s) {
    if (s <= 0.0) return -1.0;
    if (s >= 1.0) return 1.0;
    double lo = -1.0, hi = 1.0;
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      (cdf(mid) < s ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  return dd;
}

Design quantile_design(const DensityDesign& dd, int N) {
  require(N >= 2, "quantile design needs N >= 2");
  Vector x(N);
  for (int i = 0; i < N; ++i) x(i) = dd.quantile(static_cast<double>(i) / (N - 1));
  return Design::equal_weights(x);
}

Design quadrature_design(const DensityDesign& dd, int n) {
  require(n >= 1, "quadrature design needs n >= 1");
  const Interval iv = dd.interval;
  Vector x(n), w(n), edges(n + 1);
  if (dd.name == "uniform") {
    QuadratureRule rule = gauss_legendre(n, iv.lo, iv.hi);
    x = rule.nodes;
    w = rule.weights / iv.length();
    edges(0) = iv.lo;
    for (int i = 0; i < n; ++i) edges(i + 1) = edges(i) + w(i) * iv.length();
    edges(n) = iv.hi;
  } else if (dd.name == "arcsine") {
    for (int k = 0; k < n; ++k) x(k) = -std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * n));
    for (int k = 0; k <= n; ++k) edges(k) = -std::cos(k * std::numbers::pi / n);
    w.setConstant(1.0 / n);
  } else {
    for (int k = 0; k < n; ++k) x(k) = dd.quantile((k + 0.5) / n);
    for (int k = 0; k <= n; ++k) edges(k) = dd.quantile(static_cast<double>(k) / n);
    w.setConstant(1.0 / n);
  }
  edges(0) = iv.lo;
  edges(n) = iv.hi;
  return Design(x, w, edges).with_density(dd);
}

Design cell_discretization(const DensityDesign& dd, const Vector& grid) {
  Design base = Design::equal_weights(grid);
  const Vector& e = base.cell_edges();
  Vector w(base.size());
  for (Index i = 0; i < base.size(); ++i) w(i) = dd.cdf(e(i + 1)) - dd.cdf(e(i));
  Vector clipped = e;
  clipped(0) = std::max(e(0), dd.interval.lo);
  clipped(e.size() - 1) = std::min(e(e.size() - 1), dd.interval.hi);
  return Design(base.support(), w, clipped).with_density(dd);
}

Design triangular_lattice_design(double lambda) {
  require(lambda >= 1 && std::floor(lambda) == lambda && lambda < 1e6,
          "lattice design needs a positive integer lambda");
  const int l = static_cast<int>(lambda);
  Vector x(2 * l + 1);
  for (int k = 0; k <= 2 * l; ++k) x(k) = -1.0 + static_cast<double>(k) / l;
  return Design::equal_weights(x);
}

Design two_point_design() { return Design(Vector{{-1.0, 1.0}}, Vector{{0.5, 0.5}}); }

Vector equispaced(int n, Interval interval) {
  require(n >= 2, "grid needs at least two points");
  Vector x = Vector::LinSpaced(n, interval.lo, interval.hi);
  x(0) = interval.lo;
  x(n - 1) = interval.hi;
  return x;
}

Design uniform_grid_design(int n, Interval interval) { return Design::equal_weights(equispaced(n, interval)); }

double kolmogorov_distance(const Design& design, const DensityDesign& dd) {
  double below = 0.0, worst = 0.0;
  for (Index i = 0; i < design.size(); ++i) {
    const double F = dd.cdf(design.support()(i));
    const double above = below + design.weights()(i);
    worst = std::max({worst, std::abs(below - F), std::abs(above - F)});
    below = above;
  }
  return worst;
}

double cell_edge_distance(const Design& design, const DensityDesign& dd) {
  double cum = 0.0, worst = 0.0;
  const Vector& e = design.cell_edges();
  for (Index i = 0; i < design.size(); ++i) {
    cum += design.weights()(i);
    const double edge = std::min(e(i + 1), dd.interval.hi);
    worst = std::max(worst, std::abs(cum - dd.cdf(edge)));
  }
  return worst;
}

}  // namespace corrdesign
