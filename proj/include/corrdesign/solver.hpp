#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "corrdesign/optimality.hpp"

namespace corrdesign {

struct FixedBeta {
  double beta = 0.0;
};
// beta_r = min_j psi(x_j) - margin
struct AdaptiveMin {
  double margin = 0.1;
};

struct SolverConfig {
  int grid_n = 201;
  std::variant<FixedBeta, AdaptiveMin> beta_rule = AdaptiveMin{};
  int max_iter = 5000;
  double conv_tol = 1e-7;
  double weight_floor = 1e-10;
  // With AdaptiveMin: retry a step with a doubled margin while it increases
  // the criterion.
  bool backtrack = true;
  MomentOptions moments;
  double check_tol = 1e-3;
};

struct TraceRow {
  int iter = 0;
  double criterion = 0;
  double max_psi_dev = 0;
  double beta = 0;
};

struct SolveResult {
  Design design;       // atoms below the weight floor removed
  Design grid_design;  // all grid points with their final weights
  OptimalityReport report;
  std::vector<TraceRow> trace;
  bool converged = false;
  int iterations = 0;
  double final_deviation = 0;
  double criterion = 0;
  int monotonicity_warnings = 0;
  int rejected_steps = 0;
  // Options that reproduce the solver's kernel (smoothing pinned to the grid).
  MomentOptions moments;
};

// Update function at every atom of the design (NaN where f vanishes):
// phi / b for the D-criterion; 1 + (phi - b) / tr(DC) for the c-criterion,
// where b changes sign. Both equal 1 exactly where phi = b.
Vector psi_values(const Design& design, const RegressionBasis& basis, const CovarianceKernel& kernel,
                  const Criterion& criterion, const MomentOptions& options = {});

// w_i <- w_i (psi_i - beta) / sum_j w_j (psi_j - beta) on the design's own
// support. Throws StepRejectedError when a positive weight would get a
// nonpositive factor.
Design multiplicative_step(const Design& design, const RegressionBasis& basis, const CovarianceKernel& kernel,
                           const Criterion& criterion, double beta, const MomentOptions& options = {});

// Multiplicative algorithm on an equispaced grid over the basis domain.
// `initial` is projected onto the grid; by default the uniform grid design.
SolveResult solve(const RegressionBasis& basis, const CovarianceKernel& kernel, const Criterion& criterion,
                  const SolverConfig& config = {}, const std::optional<Design>& initial = std::nullopt);

// (det D(reference) / det D(design))^(1/m)
double efficiency(const Design& design, const Design& reference_opt, const RegressionBasis& basis,
                  const CovarianceKernel& kernel, const MomentOptions& options = {});

}  // namespace corrdesign
