#include <limits>
#include <random>

#include "corrdesign/designs.hpp"
#include "corrdesign/kernels.hpp"
#include "test_util.hpp"

using namespace corrdesign;
using namespace testutil;

namespace {

std::vector<CovarianceKernel> all_families() {
  return {CovarianceKernel::exponential(1.3),
          CovarianceKernel::gaussian(2.0),
          CovarianceKernel::triangular(0.7),
          CovarianceKernel::spherical(2.0),
          CovarianceKernel::power_exponential(1.0, 1.5),
          CovarianceKernel::logarithmic(1.5, 0.5),
          CovarianceKernel::power_singular(0.5, 1.0, 0.2),
          CovarianceKernel::periodic_default(),
          CovarianceKernel::smoothed_log(0.05),
          CovarianceKernel::brownian_min(),
          CovarianceKernel::tabulated_from_triples({{0, 0, 2}, {0, 1, 0.5}, {1, 1, 2}})};
}

double log_cell_mean_oracle(double delta, double t) {
  // Mean of -ln (t - u)^2 over u in [-delta, delta].
  return simpson([&](double u) { return -std::log((t - u) * (t - u)); }, -delta, delta) / (2 * delta);
}

}  // namespace

TEST_CASE("kernel evaluation examples") {
  CHECK(CovarianceKernel::triangular(1.0)(0.3, 0.5) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(CovarianceKernel::logarithmic()(0.0, 1.0) == 0.0);
  CHECK(CovarianceKernel::exponential(1.0)(-1.0, 1.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  // 1 - (3/2)(1/2) + (1/2)(1/2)^3
  const double s = 0.5;
  CHECK(CovarianceKernel::spherical(2.0)(0.0, 1.0) == doctest::Approx(1 - 1.5 * s + 0.5 * s * s * s).epsilon(1e-15));
  CHECK(CovarianceKernel::spherical(2.0)(0.0, 1.0) == doctest::Approx(0.3125).epsilon(1e-15));
  CHECK(CovarianceKernel::spherical(2.0)(-1.0, 1.0) == 0.0);
  CHECK(CovarianceKernel::gaussian(2.0)(0.0, 0.5) == doctest::Approx(std::exp(-0.5)));
  CHECK(CovarianceKernel::brownian_min()(0.3, 0.7) == doctest::Approx(0.3));
  CHECK(CovarianceKernel::power_singular(0.5)(0.0, 0.25) == doctest::Approx(2.0));
}

TEST_CASE("singular kernels return +inf on the diagonal only") {
  const double inf = std::numeric_limits<double>::infinity();
  for (const auto& k : {CovarianceKernel::logarithmic(), CovarianceKernel::power_singular(0.3)}) {
    CHECK(k.singular_on_diagonal());
    CHECK(k(0.2, 0.2) == inf);
    CHECK(std::isfinite(k(0.2, 0.2 + 1e-12)));
  }
  CHECK_FALSE(CovarianceKernel::power_singular(0.3, 1.0, 0.0, 0.01).singular_on_diagonal());
  CHECK_FALSE(CovarianceKernel::smoothed_log(0.1).singular_on_diagonal());
}

TEST_CASE("parameter validation at construction") {
  CHECK_THROWS_AS(CovarianceKernel::exponential(-1.0), ConfigError);
  CHECK_THROWS_AS(CovarianceKernel::exponential(0.0), ConfigError);
  CHECK_THROWS_AS(CovarianceKernel::spherical(0.0), ConfigError);
  CHECK_THROWS_AS(CovarianceKernel::power_exponential(1.0, 2.5), ConfigError);
  CHECK_THROWS_AS(CovarianceKernel::power_singular(1.0), ConfigError);
  CHECK_THROWS_AS(CovarianceKernel::logarithmic(-1.0), ConfigError);
  CHECK_THROWS_AS(CovarianceKernel::logarithmic(1.0, -0.5), ConfigError);
  CHECK_THROWS_AS(CovarianceKernel::smoothed_log(0.0), ConfigError);
  CHECK_THROWS_AS(CovarianceKernel::periodic_cos_mix({{0.5, 1, 1}, {0.4, 1, 2}}), ConfigError);
  CHECK_THROWS_AS(CovarianceKernel::periodic_cos_mix({{-0.5, 1, 1}, {1.5, 1, 2}}), ConfigError);
  CHECK_THROWS_AS(smoothed_log(-0.1, 1.0), ConfigError);
}

TEST_CASE("smoothed log kernel against convolution quadrature") {
  // Frozen against the convolution of -ln t^2 with the uniform density on
  // [-delta, delta].
  CHECK(smoothed_log(0.1, 2.0) == doctest::Approx(log_cell_mean_oracle(0.1, 2.0)).epsilon(1e-10));
  CHECK(smoothed_log(0.1, 0.5) == doctest::Approx(log_cell_mean_oracle(0.1, 0.5)).epsilon(1e-10));
  CHECK(smoothed_log(0.1, 0.0) == doctest::Approx(2.0 - 2.0 * std::log(0.1)).epsilon(1e-14));
  CHECK(smoothed_log(0.1, 0.0) == doctest::Approx(6.60517).epsilon(1e-6));
  // Singular integrand at t = 0: u = delta s^2 removes the singularity.
  const double oracle0 =
      simpson([](double s) { return s == 0 ? 0.0 : -std::log(std::pow(0.1 * s * s, 2)) * 2 * 0.1 * s; }, 0, 1) / 0.1;
  CHECK(smoothed_log(0.1, 0.0) == doctest::Approx(oracle0).epsilon(1e-6));
  // t = +-delta: finite by 0 log 0 = 0.
  CHECK(std::isfinite(smoothed_log(0.1, 0.1)));
  CHECK(smoothed_log(0.1, 0.1) == doctest::Approx(2.0 - 0.2 * std::log(0.2) / 0.1).epsilon(1e-14));
  for (double t : {0.0, 0.05, 0.1, 0.3, 1.7}) CHECK(smoothed_log(0.07, t) == smoothed_log(0.07, -t));
}

TEST_CASE("smoothed log converges monotonically to -ln t^2") {
  for (double t : {0.3, 0.7, 1.5}) {
    const double target = -std::log(t * t);
    double previous = std::numeric_limits<double>::infinity();
    for (double delta : {0.1, 0.05, 0.02}) {
      const double err = std::abs(smoothed_log(delta, t) - target);
      CHECK(err < previous);
      previous = err;
    }
    // Leading term of the error: delta^2 / (3 t^2).
    CHECK(previous == doctest::Approx(0.02 * 0.02 / (3 * t * t)).epsilon(0.02));
  }
}

TEST_CASE("psd diagnostic") {
  const auto e = psd_diagnostic(CovarianceKernel::exponential(1.0), equispaced(11));
  CHECK(e.pass);
  // Eigen-decomposition oracle: smallest eigenvalue of the Gram matrix.
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram_matrix(CovarianceKernel::exponential(1.0), equispaced(11)));
  CHECK(e.min_eigenvalue == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-10));
  CHECK(es.eigenvalues()(0) > 0);

  CHECK(psd_diagnostic(CovarianceKernel::triangular(0.5), equispaced(21)).pass);
  const auto neg = psd_diagnostic(CovarianceKernel::constant(-1.0), equispaced(5));
  CHECK_FALSE(neg.pass);
  CHECK(neg.min_eigenvalue == doctest::Approx(-5.0));
  CHECK_THROWS_AS(psd_diagnostic(CovarianceKernel::logarithmic(), equispaced(11), Smoothing::none()),
                  SmoothingRequiredError);
  const auto log_psd = psd_diagnostic(CovarianceKernel::logarithmic(), equispaced(101));
  CHECK(log_psd.pass);
  CHECK(log_psd.smoothing_halfwidth == doctest::Approx(0.01));
  CHECK(psd_diagnostic(CovarianceKernel::power_singular(0.5), equispaced(101)).pass);
  CHECK_THROWS_AS(psd_diagnostic(CovarianceKernel::exponential(1.0), equispaced(1)), ConfigError);
}

TEST_CASE("gram matrix of a singular kernel needs a policy") {
  Vector x = equispaced(5);
  CHECK_THROWS_AS(gram_matrix(CovarianceKernel::logarithmic(), x), SingularDiagonalError);
  Vector y = x.array() + 0.01;
  CHECK(gram_matrix(CovarianceKernel::logarithmic(), x, y).allFinite());
}

TEST_CASE("symmetry of every family on random pairs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0), u01(0.0, 1.0);
  for (const auto& k : all_families()) {
    const bool unit = k.family() == KernelFamily::BrownianMin || k.family() == KernelFamily::Tabulated;
    for (int i = 0; i < 10000; ++i) {
      const double a = unit ? u01(rng) : u(rng), b = unit ? u01(rng) : u(rng);
      REQUIRE(k(a, b) == k(b, a));
    }
  }
}

TEST_CASE("periodicity of the cosine mixture") {
  const auto k = CovarianceKernel::periodic_cos_mix({{0.3, 1, 1}, {0.5, 2, 2}, {0.2, 3, 1}});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = u(rng);
    CHECK(k.at_lag(t) == doctest::Approx(k.at_lag(t + 1.0)).epsilon(1e-12));
  }
  CHECK(k.periodic());
  CHECK(k.period() == 1.0);
  CHECK(CovarianceKernel::periodic_default().at_lag(0.25) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("convexity of the variance functional on random signed measures") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(0.01, 0.99);
  const Vector grid = equispaced(41);
  std::vector<CovarianceKernel> kernels{CovarianceKernel::exponential(1.0), CovarianceKernel::triangular(0.5),
                                        CovarianceKernel::gaussian(1.0), CovarianceKernel::logarithmic().smoothed(0.025),
                                        CovarianceKernel::power_singular(0.5).smoothed(0.025)};
  int violations = 0;
  for (const auto& k : kernels) {
    const Matrix G = gram_matrix(k, grid);
    for (int trial = 0; trial < 200; ++trial) {
      const Vector v0 = random_signed(rng, grid.size()), v1 = random_signed(rng, grid.size());
      const double a = ua(rng);
      const double lhs = kernel_quadratic_form(G, a * v0 + (1 - a) * v1);
      const double rhs = a * kernel_quadratic_form(G, v0) + (1 - a) * kernel_quadratic_form(G, v1);
      violations += lhs > rhs + 1e-10 * (1 + std::abs(rhs));
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("cell means of singular kernels") {
  // Log kernel over the square [0, w]^2: 3 - 2 ln w.
  CHECK(CovarianceKernel::logarithmic().cell_square_mean(0.0, 0.1) == doctest::Approx(3 - 2 * std::log(0.1)));
  // Power kernel: 2 w^-alpha / ((1 - alpha)(2 - alpha)).
  const double a = 0.5, w = 0.2;
  CHECK(CovarianceKernel::power_singular(a).cell_square_mean(0.3, 0.5) ==
        doctest::Approx(2 * std::pow(w, -a) / ((1 - a) * (2 - a))));
  // One-dimensional mean against quadrature with the singularity at an end.
  const double x = 0.13, lo = 0.1, hi = 0.2;
  const double oracle = (simpson([&](double s) { return s == 0 ? 0.0 : -std::log(std::pow(s * s, 2)) * 2 * s; }, 0,
                                 std::sqrt(x - lo)) +
                         simpson([&](double s) { return s == 0 ? 0.0 : -std::log(std::pow(s * s, 2)) * 2 * s; }, 0,
                                 std::sqrt(hi - x))) /
                        (hi - lo);
  CHECK(CovarianceKernel::logarithmic().cell_mean(x, lo, hi) == doctest::Approx(oracle).epsilon(1e-6));
  // Non-singular kernels: plain average.
  const auto e = CovarianceKernel::exponential(1.0);
  CHECK(e.cell_mean(0.0, 0.5, 1.0) ==
        doctest::Approx(simpson([&](double u) { return e(0.0, u); }, 0.5, 1.0) / 0.5).epsilon(1e-8));
}

TEST_CASE("scaling, tabulated kernels and parameters") {
  const auto k = CovarianceKernel::exponential(0.5).scaled(3.0);
  CHECK(k(0.0, 1.0) == doctest::Approx(3.0 * std::exp(-0.5)));
  CHECK_THROWS_AS(CovarianceKernel::exponential(1.0).scaled(0.0), ConfigError);
  const auto t = CovarianceKernel::tabulated_from_triples({{0, 0, 1}, {0, 1, 0.5}, {1, 1, 1}});
  CHECK(t(0.0, 1.0) == doctest::Approx(0.5));
  CHECK(t(1.0, 0.0) == doctest::Approx(0.5));
  CHECK(t(0.5, 0.5) == doctest::Approx(0.75));
  const auto wn = CovarianceKernel::white_noise(equispaced(4), 2.0);
  CHECK(wn(-1.0, -1.0) == 2.0);
  CHECK(wn(-1.0, 1.0) == 0.0);
  CHECK(CovarianceKernel::triangular(0.25).params().at("lambda") == 0.25);
  CHECK(kernel_family_from_string("smoothed_log") == KernelFamily::SmoothedLog);
  CHECK_THROWS_AS(kernel_family_from_string("nope"), ConfigError);
}
