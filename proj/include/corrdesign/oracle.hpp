#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corrdesign/optimality.hpp"

namespace corrdesign {

struct SimulationConfig {
  int n_rep = 100000;
  std::uint64_t seed = 0;
  Vector points;
  // Replications are generated in blocks with independent seeded streams and
  // merged in block order, so results do not depend on the thread count.
  int block_size = 4096;
  int threads = 1;
};

struct SimulationResult {
  Matrix empirical;
  Matrix exact;
  Matrix standard_error;
  Matrix z;  // (empirical - exact) / standard_error
  double max_abs_z = 0;
  double jitter = 0;  // diagonal jitter added for the Cholesky factor
  bool within(double k = 5.0) const { return max_abs_z <= k; }
};

// Draws Gaussian errors with covariance [K(x_i, x_j)], fits ordinary least
// squares each time, and compares the empirical covariance of the estimates
// with exact_lse_cov.
SimulationResult simulate_lse_cov(const SimulationConfig& config, const RegressionBasis& basis,
                                  const CovarianceKernel& kernel);

// Symmetric candidates on a grid over [-1, 1]: two-point designs
// {-a, a; 1/2, 1/2} and three-point designs {-a, 0, a; w, 1 - 2w, w} with
// w on a grid of the given step, plus the listed extra values of w.
struct CandidateFamily {
  Vector positive_points;
  double weight_step = 0.05;
  std::vector<double> extra_weights{1.0 / 3.0};
  bool two_point = true;
  bool three_point = true;
  static CandidateFamily symmetric(int grid_points = 41, double weight_step = 0.05);
};

struct CandidateRow {
  Vector support;
  Vector weights;
  double value = 0;
  bool skipped = false;
  std::string note;
};

struct BruteForceResult {
  Vector best_support;
  Vector best_weights;
  double best_value = 0;
  int evaluated = 0;
  int skipped = 0;
  std::vector<CandidateRow> table;
};

BruteForceResult brute_force_best_design(const CandidateFamily& family, const RegressionBasis& basis,
                                         const CovarianceKernel& kernel, const Criterion& criterion,
                                         const MomentOptions& options = {});

}  // namespace corrdesign
