#include <numbers>
#include <random>

#include "corrdesign/optimality.hpp"
#include "corrdesign/spectral.hpp"
#include "test_util.hpp"

using namespace corrdesign;
using namespace testutil;

namespace {
constexpr double kPi = std::numbers::pi;
const Vector kInterior{{-0.93, -0.6, -0.25, 0.0, 0.17, 0.5, 0.81, 0.97}};
}  // namespace

TEST_CASE("Chebyshev polynomials under the log kernel and the arcsine law") {
  CHECK(chebyshev_log_eigenvalue(0) == doctest::Approx(2 * std::numbers::ln2).epsilon(1e-15));
  CHECK(chebyshev_log_eigenvalue(2) == 1.0);
  for (int n = 0; n <= 8; ++n) CHECK(chebyshev_log_identity(n, kInterior) <= 1e-6);
  const auto r0 = mercer_residual(chebyshev_log_pair(0), kInterior);
  CHECK(r0.empirical_eigenvalue == doctest::Approx(1.3862944).epsilon(1e-7));
  const auto r2 = mercer_residual(chebyshev_log_pair(2), kInterior);
  CHECK(r2.empirical_eigenvalue == doctest::Approx(1.0).epsilon(1e-7));
  const auto& log = CovarianceKernel::logarithmic();
  auto T = [](int n) { return std::function<double(double)>([n](double x) { return chebyshev_t(n, x); }); };
  CHECK(apply_integral_operator(log, arcsine_design(), T(0), 0.0, 512) ==
        doctest::Approx(2 * std::numbers::ln2).epsilon(1e-9));
  CHECK(apply_integral_operator(log, arcsine_design(), T(1), 0.5, 512) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(apply_integral_operator(log, arcsine_design(), T(2), 0.0, 512) == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("cosine basis under periodic kernels") {
  const auto cos4 = CovarianceKernel::periodic_cos_mix({{1.0, 2, 1}});  // cos(4 pi t)
  const auto cos2 = CovarianceKernel::periodic_cos_mix({{1.0, 1, 2}});  // cos^2(2 pi t)
  CHECK(periodic_basis_integral(cos2, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(periodic_basis_integral(cos2, 3) == doctest::Approx(std::numbers::sqrt2 / 4).epsilon(1e-14));
  CHECK(periodic_eigenvalue(cos2, 3) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(periodic_eigenvalue(cos4, 3) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(periodic_eigenvalue(cos4, 2) == 0.0);
  // Quadrature oracle for the analytic integrals.
  for (int j : {1, 2, 3, 4}) {
    const auto basis = RegressionBasis::cosine_series({j});
    const double q = simpson([&](double u) { return cos2(u, 0.0) * basis(u)(0); }, 0.0, 1.0);
    CHECK(periodic_basis_integral(cos2, j) == doctest::Approx(q).epsilon(1e-9));
  }
  for (int j = 1; j <= 3; ++j) {
    const auto r = mercer_residual(cosine_periodic_pair(j, CovarianceKernel::periodic_default()),
                                   Vector{{0.0, 0.13, 0.4, 0.77, 1.0}});
    CHECK(r.relative_residual <= 1e-10);
    CHECK(r.empirical_eigenvalue > 0);
  }
  CHECK_THROWS_AS(cosine_periodic_pair(4, CovarianceKernel::periodic_default()), ConfigError);
}

TEST_CASE("generalized arcsine and power-singular kernel") {
  const double alpha = 0.5;
  CHECK(gegenbauer_power_eigenvalue(0, alpha) == doctest::Approx(kPi / std::cos(kPi / 4)).epsilon(1e-14));
  for (int n = 0; n <= 2; ++n) {
    const auto pair = gegenbauer_power_pair(n, alpha);
    const auto r = mercer_residual(pair, kInterior, 256, 1e-6);
    CHECK(std::abs(r.empirical_eigenvalue - pair.eigenvalue) <= 1e-4 * pair.eigenvalue);
    CHECK(r.empirical_eigenvalue > 0);
  }
}

TEST_CASE("Brownian motion on [0, 1]") {
  const Vector pts{{0.05, 0.3, 0.5, 0.72, 1.0}};
  for (int k = 0; k <= 3; ++k) {
    const auto r = mercer_residual(brownian_sine_pair(k), pts);
    CHECK(r.max_residual <= 1e-8);
    CHECK(r.empirical_eigenvalue == doctest::Approx(1.0 / std::pow((k + 0.5) * kPi, 2)).epsilon(1e-8));
  }
}

TEST_CASE("exponential kernel frequencies") {
  for (double lambda : {0.3, 1.0, 2.5, 7.0}) {
    const auto w = exp_kernel_frequencies(lambda, 8);
    REQUIRE(w.size() == 8);
    for (int k = 1; k <= 8; ++k) {
      const double wk = w[k - 1];
      CHECK(wk > (k - 1) * kPi / 2);
      CHECK(wk < k * kPi / 2);
      if (k > 1) CHECK(wk > w[k - 2]);
      // tan(2w) (lambda^2 - w^2) + 2 lambda w = 0, written without the poles.
      const double res = std::sin(2 * wk) * (lambda * lambda - wk * wk) + 2 * lambda * wk * std::cos(2 * wk);
      CHECK(std::abs(res) <= 1e-9 * (1 + wk * wk));
    }
  }
  for (int k : {1, 2, 3}) {
    const auto r = mercer_residual(exponential_pair(1.0, k), Vector{{-1.0, -0.4, 0.0, 0.3, 0.9}}, 512);
    CHECK(r.relative_residual <= 1e-6);
    CHECK(r.empirical_eigenvalue > 0);
  }
  CHECK_THROWS_AS(exp_kernel_frequencies(-1.0, 2), ConfigError);
}

TEST_CASE("Fourier coefficients of ln sin^2") {
  for (int n = 0; n <= 3; ++n)
    for (int k = 0; k <= 3; ++k)
      CHECK(std::abs(log_sine_fourier_coefficient(n, k) - log_sine_fourier_closed_form(n, k)) <= 1e-6);
}

TEST_CASE("uniform design is universally optimal for cosine bases") {
  std::mt19937_64 rng(59);
  const Design uniform = quadrature_design(uniform_density({0.0, 1.0}), 64);
  const Vector grid = equispaced(201, {0.0, 1.0});
  // Both mixtures have every frequency 0..7 in their spectrum.
  std::vector<CosineTerm> geometric{{1.0 / 128, 0, 1}};
  for (int k = 1; k <= 7; ++k) geometric.push_back({std::ldexp(1.0, -k), k, 1});
  const std::vector<CovarianceKernel> kernels{CovarianceKernel::periodic_cos_mix(geometric),
                                             CovarianceKernel::periodic_cos_mix({{0.5, 1, 6}, {0.5, 1, 7}})};
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<int> idx;
    for (int j = 1; j <= 8; ++j)
      if (std::bernoulli_distribution(0.5)(rng) || (j == 8 && idx.empty())) idx.push_back(j);
    const auto basis = RegressionBasis::cosine_series(idx);
    for (const auto& k : kernels) {
      double sup = 0.0;
      for (double x : grid) sup = std::max(sup, g_fn(x, uniform, basis, k).cwiseAbs().maxCoeff());
      CHECK(sup <= 1e-6);
    }
  }
}

TEST_CASE("named pairs") {
  CHECK(named_pair("chebyshev-log", 3, 0).eigenvalue == doctest::Approx(2.0 / 3));
  CHECK(named_pair("brownian-sine", 0, 0).name == "brownian-sine");
  CHECK_THROWS_AS(named_pair("nonsense", 0, 0), ConfigError);
}
