#include <random>

#include "corrdesign/designs.hpp"
#include "corrdesign/quadrature.hpp"
#include "test_util.hpp"

using namespace corrdesign;
using namespace testutil;

namespace {

void check_design(const Design& d, const std::vector<double>& x, const std::vector<double>& w, double tol = 1e-14) {
  REQUIRE(d.size() == static_cast<Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(d.support()(i) == doctest::Approx(x[i]).epsilon(tol));
    CHECK(d.weights()(i) == doctest::Approx(w[i]).epsilon(tol));
  }
}

// Integral of a density of the form c (1 - x^2)^((alpha - 1) / 2).
double density_mass(const DensityDesign& dd, double alpha) {
  const double c = dd.density(0.0);
  return c * endpoint_weighted_integral([](double) { return 1.0; }, alpha);
}

}  // namespace

TEST_CASE("design invariants") {
  const Design d(Vector{{0.5, -0.5, 0.5, 0.0}}, Vector{{1.0, 1.0, 2.0, 4.0}});
  check_design(d, {-0.5, 0.0, 0.5}, {0.125, 0.5, 0.375});
  CHECK(d.weights().sum() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(Design(Vector{{0.0, 1.0}}, Vector{{-0.1, 1.1}}), ConfigError);
  CHECK_THROWS_AS(Design(Vector{{0.0, 1.0}}, Vector{{0.0, 0.0}}), ConfigError);
  CHECK_THROWS_AS(Design(Vector{{0.0, 1.0}}, Vector{{1.0}}), ConfigError);
  // Cells: Voronoi edges with mirrored ends.
  const Design e = Design::equal_weights(Vector{{-1.0, 0.0, 1.0}});
  CHECK(e.cell_edges()(0) == doctest::Approx(-1.5));
  CHECK(e.cell_edges()(1) == doctest::Approx(-0.5));
  CHECK(e.cell_of(0.2) == 1);
  CHECK(e.atom_at(1.0) == 2);
  CHECK(e.atom_at(0.9) == -1);
  CHECK(e.min_gap() == doctest::Approx(1.0));
}

TEST_CASE("merging preserves mass exactly") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> pick(0, 9);
  for (int trial = 0; trial < 100; ++trial) {
    Vector x(30);
    for (Index i = 0; i < x.size(); ++i) x(i) = -1.0 + 0.2 * pick(rng);
    const Vector w = random_weights(rng, 30);
    const Design d(x, w);
    CHECK(std::abs(d.weights().sum() - 1.0) <= 1e-14);
    for (Index i = 1; i < d.size(); ++i) CHECK(d.support()(i) > d.support()(i - 1));
  }
}

TEST_CASE("arcsine design") {
  const auto a = arcsine_design();
  CHECK(a.density(0.0) == doctest::Approx(1 / M_PI).epsilon(1e-15));
  CHECK(std::abs(a.quantile(0.5)) < 1e-15);
  CHECK(density_mass(a, 0.0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(a.cdf(0.0) == doctest::Approx(0.5));
  CHECK(a.cdf(a.quantile(0.3)) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("generalized arcsine design") {
  for (double alpha : {0.25, 0.5, 0.75}) {
    const auto g = generalized_arcsine_design(alpha);
    CHECK(density_mass(g, alpha) == doctest::Approx(1.0).epsilon(1e-8));
    for (double x : {0.1, 0.5, 0.93}) CHECK(g.density(x) == g.density(-x));
    CHECK(g.cdf(g.quantile(0.2)) == doctest::Approx(0.2).epsilon(1e-10));
    CHECK(g.cdf(0.0) == doctest::Approx(0.5).epsilon(1e-10));
  }
  // The density flattens as alpha grows: p(0) / p(0.9) increases.
  double previous = 0.0;
  for (double alpha : {0.25, 0.5, 0.75}) {
    const auto g = generalized_arcsine_design(alpha);
    const double ratio = g.density(0.0) / g.density(0.9);
    CHECK(ratio > previous);
    previous = ratio;
  }
  // Normalizer Gamma(a/2 + 1) / (sqrt(pi) Gamma((a + 1)/2)); at a = 1 the
  // density is uniform 1/2.
  CHECK(generalized_arcsine_constant(1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(generalized_arcsine_design(0.0), ConfigError);
  CHECK_THROWS_AS(generalized_arcsine_design(1.0), ConfigError);
}

TEST_CASE("quantile designs") {
  check_design(quantile_design(uniform_density(), 3), {-1, 0, 1}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  check_design(quantile_design(arcsine_design(), 3), {-1, 0, 1}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  const double c = std::cos(M_PI / 4);
  check_design(quantile_design(arcsine_design(), 5), {-1, -c, 0, c, 1}, {0.2, 0.2, 0.2, 0.2, 0.2});
  const Design q = quantile_design(generalized_arcsine_design(0.5), 41);
  for (Index i = 1; i < q.size(); ++i) CHECK(q.support()(i) > q.support()(i - 1));
  CHECK_THROWS_AS(quantile_design(uniform_density(), 1), ConfigError);
}

TEST_CASE("reference designs") {
  check_design(triangular_lattice_design(1), {-1, 0, 1}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  check_design(triangular_lattice_design(2), {-1, -0.5, 0, 0.5, 1}, {0.2, 0.2, 0.2, 0.2, 0.2});
  CHECK(triangular_lattice_design(3).weights().sum() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(triangular_lattice_design(1.5), ConfigError);
  CHECK_THROWS_AS(triangular_lattice_design(0), ConfigError);
  const Design t = two_point_design();
  check_design(t, {-1, 1}, {0.5, 0.5});
  CHECK(t.support()(0) == -t.support()(1));
}

TEST_CASE("quadrature designs carry exact cells") {
  const Design a = quadrature_design(arcsine_design(), 8);
  const auto gc = gauss_chebyshev(8);
  for (Index i = 0; i < 8; ++i) {
    CHECK(a.support()(i) == doctest::Approx(gc.nodes(i)).epsilon(1e-13));
    CHECK(a.cell_edges()(i) == doctest::Approx(-std::cos(i * M_PI / 8)).epsilon(1e-13));
  }
  CHECK(a.explicit_cells());
  const Design u = quadrature_design(uniform_density(), 5);
  const auto gl = gauss_legendre(5);
  for (Index i = 0; i < 5; ++i) CHECK(u.weights()(i) == doctest::Approx(gl.weights(i) / 2).epsilon(1e-13));
  // Gauss-Legendre integrates x^8 exactly with 5 nodes.
  CHECK((u.weights().array() * u.support().array().pow(8)).sum() == doctest::Approx(1.0 / 9).epsilon(1e-13));
}

TEST_CASE("distances to a density") {
  const auto a = arcsine_design();
  CHECK(kolmogorov_distance(quantile_design(a, 201), a) < 0.01);
  CHECK(cell_edge_distance(quadrature_design(a, 51), a) < 1e-12);
  CHECK(kolmogorov_distance(two_point_design(), uniform_density()) == doctest::Approx(0.5));
  const Design m = mixture(two_point_design(), Design::point_mass(0.0), 0.5);
  check_design(m, {-1, 0, 1}, {0.25, 0.5, 0.25});
}
