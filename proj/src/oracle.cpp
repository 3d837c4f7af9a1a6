#include "corrdesign/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace corrdesign {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct BlockSums {
  Matrix sum;     // sum of a a^T
  Matrix sum_sq;  // sum of (a_i a_j)^2
};

BlockSums run_block(const Matrix& A, std::uint64_t seed, std::uint64_t block, int reps) {
  const Index m = A.rows(), N = A.cols();
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(block)));
  std::normal_distribution<double> normal;
  BlockSums s{Matrix::Zero(m, m), Matrix::Zero(m, m)};
  Vector z(N), a(m);
  for (int r = 0; r < reps; ++r) {
    for (Index i = 0; i < N; ++i) z(i) = normal(rng);
    a.noalias() = A * z;
    Matrix outer = a * a.transpose();
    s.sum += outer;
    s.sum_sq += outer.cwiseProduct(outer);
  }
  return s;
}

}  // namespace

SimulationResult simulate_lse_cov(const SimulationConfig& config, const RegressionBasis& basis,
                                  const CovarianceKernel& kernel) {
  if (config.n_rep < 2) throw ConfigError("simulation needs at least two replications");
  if (config.block_size < 1) throw ConfigError("block size must be positive");
  if (kernel.singular_on_diagonal()) throw ConfigError("cannot sample from a singular kernel");
  const Vector& x = config.points;
  if (x.size() < basis.size()) throw ConfigError("need at least m observation points");

  SimulationResult res;
  Matrix Sigma = gram_matrix(kernel, x);
  const double trace = Sigma.trace();
  Eigen::LLT<Matrix> llt(Sigma);
  for (double rel = 1e-14; llt.info() != Eigen::Success; rel *= 10.0) {
    if (rel > 1e-10) throw KernelNotPsdError("Gram matrix is not positive semidefinite: Cholesky fails with jitter");
    res.jitter = rel * trace;
    llt.compute(Sigma + res.jitter * Matrix::Identity(x.size(), x.size()));
  }
  Matrix X = basis.design_matrix(x);
  Matrix P = spd_inverse(Matrix(X.transpose() * X), 1e12, "X^T X") * X.transpose();
  Matrix A = P * Matrix(llt.matrixL());

  const int n_blocks = (config.n_rep + config.block_size - 1) / config.block_size;
  std::vector<BlockSums> blocks(n_blocks);
  auto work = [&](int first, int stride) {
    for (int b = first; b < n_blocks; b += stride) {
      const int reps = std::min(config.block_size, config.n_rep - b * config.block_size);
      blocks[b] = run_block(A, config.seed, static_cast<std::uint64_t>(b), reps);
    }
  };
  const int threads = std::max(1, std::min(config.threads, n_blocks));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }
  const Index m = basis.size();
  Matrix sum = Matrix::Zero(m, m), sum_sq = Matrix::Zero(m, m);
  for (const auto& b : blocks) {
    sum += b.sum;
    sum_sq += b.sum_sq;
  }
  const double n = config.n_rep;
  res.empirical = sum / n;
  res.exact = exact_lse_cov(x, basis, kernel);
  Matrix var = (sum_sq / n - res.empirical.cwiseProduct(res.empirical)).cwiseMax(0.0);
  res.standard_error = (var / n).cwiseSqrt();
  res.z = Matrix::Zero(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      const double diff = res.empirical(i, j) - res.exact(i, j);
      const double se = res.standard_error(i, j);
      res.z(i, j) = se > 0 ? diff / se : (std::abs(diff) <= 1e-12 * (1 + std::abs(res.exact(i, j))) ? 0.0 : INFINITY);
    }
  res.max_abs_z = res.z.cwiseAbs().maxCoeff();
  return res;
}

CandidateFamily CandidateFamily::symmetric(int grid_points, double weight_step) {
  if (grid_points < 3 || grid_points % 2 == 0) throw ConfigError("symmetric candidate grid needs an odd size >= 3");
  if (!(weight_step > 0 && weight_step < 0.5)) throw ConfigError("weight step must lie in (0, 1/2)");
  CandidateFamily f;
  const int half = grid_points / 2;
  f.positive_points.resize(half);
  for (int k = 1; k <= half; ++k) f.positive_points(k - 1) = static_cast<double>(k) / half;
  f.weight_step = weight_step;
  return f;
}

BruteForceResult brute_force_best_design(const CandidateFamily& family, const RegressionBasis& basis,
                                         const CovarianceKernel& kernel, const Criterion& criterion,
                                         const MomentOptions& options) {
  BruteForceResult res;
  res.best_value = std::numeric_limits<double>::infinity();
  auto consider = [&](Vector support, Vector weights) {
    CandidateRow row{support, weights, 0.0, false, ""};
    try {
      row.value = criterion.value(cov_matrix(Design(support, weights), basis, kernel, options).D);
      ++res.evaluated;
      if (row.value < res.best_value) {
        res.best_value = row.value;
        res.best_support = support;
        res.best_weights = weights;
      }
    } catch (const NumericalError& e) {
      row.skipped = true;
      row.note = e.what();
      ++res.skipped;
    }
    res.table.push_back(std::move(row));
  };
  for (Index k = 0; k < family.positive_points.size(); ++k) {
    const double a = family.positive_points(k);
    if (family.two_point) consider(Vector{{-a, a}}, Vector{{0.5, 0.5}});
    if (family.three_point) {
      const int steps = static_cast<int>(std::floor(0.5 / family.weight_step - 1e-9));
      std::vector<double> ws = family.extra_weights;
      for (int s = 1; s <= steps; ++s) ws.push_back(s * family.weight_step);
      for (double w : ws) {
        if (!(w > 0) || 1.0 - 2.0 * w <= 1e-12) continue;
        consider(Vector{{-a, 0.0, a}}, Vector{{w, 1.0 - 2.0 * w, w}});
      }
    }
  }
  if (res.evaluated == 0) throw NumericalError("every candidate design was singular");
  return res;
}

}  // namespace corrdesign
