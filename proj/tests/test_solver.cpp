#include <random>

#include "corrdesign/solver.hpp"
#include "test_util.hpp"

using namespace corrdesign;
using namespace testutil;

namespace {

const Criterion kD = Criterion::d_optimal();

MomentOptions cell_policy() {
  MomentOptions o;
  o.policy = DiagonalPolicy::Cell;
  return o;
}

double weight_change(const Design& a, const Design& b) { return (a.weights() - b.weights()).cwiseAbs().maxCoeff(); }

double weight_near(const Design& d, double x, double radius = 1e-9) {
  double w = 0.0;
  for (Index i = 0; i < d.size(); ++i)
    if (std::abs(d.support()(i) - x) <= radius) w += d.weights()(i);
  return w;
}

}  // namespace

TEST_CASE("multiplicative step conserves mass and keeps weights positive") {
  std::mt19937_64 rng(61);
  const Vector grid = equispaced(31);
  const auto basis = RegressionBasis::monomial(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Design xi(grid, random_weights(rng, 31));
    const auto kernel = CovarianceKernel::exponential(0.5 + 0.2 * trial);
    const Vector psi = psi_values(xi, basis, kernel, kD);
    const Design next = multiplicative_step(xi, basis, kernel, kD, psi.minCoeff() - 0.1);
    CHECK(std::abs(next.weights().sum() - 1.0) <= 1e-14);
    CHECK(next.weights().minCoeff() > 0);
    // Points with larger psi gain weight relative to points with smaller psi.
    int violations = 0;
    for (Index i = 0; i < 31; ++i)
      for (Index j = 0; j < 31; ++j)
        if (psi(i) > 1 && psi(j) < 1)
          violations += !(next.weights()(i) / xi.weights()(i) > next.weights()(j) / xi.weights()(j));
    CHECK(violations == 0);
  }
}

TEST_CASE("step rejection") {
  const Vector grid = equispaced(11);
  const Design xi = uniform_grid_design(11);
  const auto basis = RegressionBasis::monomial(2);
  const auto kernel = CovarianceKernel::exponential(1.0);
  const Vector psi = psi_values(xi, basis, kernel, kD);
  CHECK_THROWS_AS(multiplicative_step(xi, basis, kernel, kD, psi.minCoeff() + 1e-3), StepRejectedError);
}

TEST_CASE("fixed points") {
  // Location model with a constant kernel: psi = 1 for every design.
  std::mt19937_64 rng(67);
  const Design xi(equispaced(21), random_weights(rng, 21));
  const Vector psi = psi_values(xi, RegressionBasis::monomial(1), CovarianceKernel::constant(1.0), kD);
  CHECK((psi.array() - 1.0).abs().maxCoeff() <= 1e-12);
  CHECK(weight_change(multiplicative_step(xi, RegressionBasis::monomial(1), CovarianceKernel::constant(1.0), kD, 0.0),
                      xi) <= 1e-12);

  const auto lin = RegressionBasis::monomial(2);
  for (double lambda : {0.1, 0.25, 0.5})
    CHECK(weight_change(multiplicative_step(two_point_design(), lin, CovarianceKernel::triangular(lambda), kD, 0.0),
                        two_point_design()) <= 1e-6);
  for (double lambda : {1.0, 2.0}) {
    const Design lattice = triangular_lattice_design(lambda);
    CHECK(weight_change(multiplicative_step(lattice, lin, CovarianceKernel::triangular(lambda), kD, 0.0), lattice) <=
          1e-6);
  }
  const Design arcsine = quadrature_design(arcsine_design(), 401);
  for (int m : {2, 3, 4}) {
    const Design next =
        multiplicative_step(arcsine, RegressionBasis::monomial(m), CovarianceKernel::logarithmic(), kD, 0.0,
                            cell_policy());
    CHECK(weight_change(next, arcsine) <= 1e-6);
  }
}

TEST_CASE("solver: triangular kernel, linear model") {
  SolverConfig cfg;
  cfg.grid_n = 101;
  cfg.max_iter = 20000;
  const auto r = solve(RegressionBasis::monomial(2), CovarianceKernel::triangular(0.25), kD, cfg);
  CHECK(weight_near(r.design, -1.0) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(weight_near(r.design, 1.0) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(weight_near(r.design, -1.0) + weight_near(r.design, 1.0) >= 0.99);
  CHECK(r.report.pass());
  CHECK(std::abs(r.design.weights().sum() - 1.0) <= 1e-12);
}

TEST_CASE("solver: location model, exponential kernel") {
  SolverConfig cfg;
  cfg.max_iter = 20000;
  const auto basis = RegressionBasis::monomial(1);
  const auto kernel = CovarianceKernel::exponential(1.0);
  const auto r = solve(basis, kernel, kD, cfg);
  CHECK(r.report.pass());
  auto variance = [&](const Design& d) { return cov_matrix(d, basis, kernel).D(0, 0); };
  const double opt = variance(r.grid_design);
  const double arcsine = variance(quadrature_design(arcsine_design(), 2000));
  const double uniform = variance(quadrature_design(uniform_density(), 2000));
  CHECK(opt <= arcsine);
  CHECK(arcsine <= uniform);
  // Closed form: endpoint atoms 1/(2 + 2 lambda) plus lambda/(1 + lambda)
  // times the uniform law, with variance 1/(1 + lambda).
  CHECK(opt == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(weight_near(r.design, -1.0) == doctest::Approx(0.25).epsilon(0.02));
  CHECK(uniform == doctest::Approx(1.0 - (1.0 - std::exp(-2.0)) / 2.0).epsilon(1e-6));
}

TEST_CASE("solver: log kernel converges to the arcsine law") {
  SolverConfig cfg;
  cfg.max_iter = 20000;
  const auto r = solve(RegressionBasis::monomial(3), CovarianceKernel::logarithmic(), kD, cfg);
  const double distance = cell_edge_distance(r.grid_design, arcsine_design());
  CHECK(distance <= 0.02);
  // Frozen measurement.
  CHECK(distance == doctest::Approx(0.011).epsilon(0.15));
  CHECK(r.report.pass());
  for (Index i = 1; i < static_cast<Index>(r.trace.size()); ++i)
    REQUIRE(r.trace[i].criterion <= r.trace[i - 1].criterion + 1e-8);
  CHECK(r.monotonicity_warnings == 0);
}

TEST_CASE("solver: fixed beta") {
  SolverConfig cfg;
  cfg.grid_n = 41;
  cfg.max_iter = 3000;
  cfg.beta_rule = FixedBeta{0.0};
  const auto r = solve(RegressionBasis::monomial(2), CovarianceKernel::exponential(2.0), kD, cfg);
  CHECK(r.grid_design.weights().minCoeff() >= 0);
  CHECK(r.report.pass());
}

TEST_CASE("solver: c-criterion") {
  SolverConfig cfg;
  cfg.grid_n = 101;
  cfg.max_iter = 20000;
  const Vector c{{1.0, 0.0, 1.0}};
  const auto basis = RegressionBasis::monomial(3);
  const auto kernel = CovarianceKernel::triangular(1.0);
  const auto r = solve(basis, kernel, Criterion::c_optimal(c), cfg);
  CHECK(r.report.pass());
  const Design start = uniform_grid_design(101);
  CHECK(r.criterion < Criterion::c_optimal(c).value(cov_matrix(start, basis, kernel).D));
}

TEST_CASE("solver rejects bad configurations") {
  SolverConfig cfg;
  cfg.grid_n = 4;
  CHECK_THROWS_AS(solve(RegressionBasis::monomial(3), CovarianceKernel::exponential(1.0), kD, cfg), ConfigError);
  cfg.grid_n = 21;
  cfg.conv_tol = 0;
  CHECK_THROWS_AS(solve(RegressionBasis::monomial(3), CovarianceKernel::exponential(1.0), kD, cfg), ConfigError);
}

TEST_CASE("efficiency") {
  SolverConfig cfg;
  cfg.max_iter = 20000;
  const auto loc = RegressionBasis::monomial(1);
  const auto kernel = CovarianceKernel::exponential(0.5);
  const auto opt = solve(loc, kernel, kD, cfg);
  CHECK(efficiency(opt.grid_design, opt.grid_design, loc, kernel) == doctest::Approx(1.0).epsilon(1e-14));
  const double eff = efficiency(two_point_design(), opt.grid_design, loc, kernel);
  CHECK(std::abs(eff - 0.978) <= 0.005);
  // Invariant under scaling of the kernel.
  const auto scaled = CovarianceKernel::exponential(0.5).scaled(3.7);
  CHECK(efficiency(two_point_design(), opt.grid_design, loc, scaled) == doctest::Approx(eff).epsilon(1e-12));

  const auto quad = RegressionBasis::monomial(3);
  const auto k25 = CovarianceKernel::exponential(2.5);
  const auto opt3 = solve(quad, k25, kD, cfg);
  const double eff3 = efficiency(quadrature_design(arcsine_design(), 2000), opt3.grid_design, quad, k25);
  // Published 0.954; the measured value is frozen here and the comparison
  // with the published one is an acceptance line.
  CHECK(eff3 == doctest::Approx(0.9391).epsilon(1e-3));
}
