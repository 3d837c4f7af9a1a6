#include "corrdesign/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace corrdesign {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Sensitivities of a weight vector on a fixed grid, with the kernel matrix
// assembled once.
class GridEngine {
 public:
  GridEngine(const Design& grid, const RegressionBasis& basis, const CovarianceKernel& kernel,
             const Criterion& criterion, const MomentOptions& options)
      : criterion_(criterion), options_(options) {
    F_ = basis.design_matrix(grid.support());
    G_ = ResolvedKernel(kernel, grid, options).gram();
    admissible_.resize(grid.size());
    for (Index i = 0; i < grid.size(); ++i) admissible_(i) = F_.row(i).cwiseAbs().maxCoeff() > 0.0;
  }

  struct State {
    Vector w, psi;
    double criterion = 0;
  };

  State evaluate(const Vector& w) const {
    State s;
    s.w = w;
    Matrix WF = w.asDiagonal() * F_;
    Matrix M = F_.transpose() * WF;
    Matrix K = G_ * WF;
    Matrix B = WF.transpose() * K;
    B = (B + B.transpose()) / 2.0;
    Matrix Minv;
    try {
      Minv = spd_inverse(M, options_.condition_limit, "information matrix M");
    } catch (const NearSingularError& e) {
      throw NearSingularError("information matrix of the current design is singular; try another initial design",
                              e.condition());
    }
    Matrix D = sandwich(Minv, B);
    Matrix C = criterion_.derivative(D);
    s.criterion = criterion_.value(D);
    Matrix phi_form = D * C * Minv;
    Matrix b_form = Minv * C * Minv;
    Matrix P = F_ * phi_form;
    Matrix Q = K * b_form.transpose();
    const bool ratio = criterion_.kind == Criterion::Kind::D;
    const double trace_DC = (D * C).trace();
    s.psi.resize(w.size());
    for (Index i = 0; i < w.size(); ++i) {
      const double phi = P.row(i).dot(F_.row(i));
      const double b = Q.row(i).dot(F_.row(i));
      if (!admissible_(i)) {
        s.psi(i) = kNaN;
      } else if (ratio) {
        s.psi(i) = b != 0.0 ? phi / b : kNaN;
      } else {
        s.psi(i) = 1.0 + (phi - b) / trace_DC;
      }
    }
    return s;
  }

  // psi with NaN (points where f vanishes) replaced by a neutral value.
  static Vector usable_psi(const Vector& psi) {
    Vector p = psi;
    for (Index i = 0; i < p.size(); ++i)
      if (std::isnan(p(i))) p(i) = 1.0;
    return p;
  }

 private:
  Criterion criterion_;
  MomentOptions options_;
  Matrix F_, G_;
  Eigen::Array<bool, Eigen::Dynamic, 1> admissible_;
};

double deviation(const Vector& w, const Vector& psi, double floor) {
  double dev = 0.0;
  for (Index i = 0; i < w.size(); ++i) {
    if (std::isnan(psi(i))) continue;
    dev = std::max(dev, psi(i) - 1.0);
    if (w(i) > floor) dev = std::max(dev, std::abs(psi(i) - 1.0));
  }
  return dev;
}

// Reweighting; returns false if a positive weight gets a nonpositive factor.
bool reweight(const Vector& w, const Vector& psi, double beta, Vector& out, double& offending) {
  out = w;
  for (Index i = 0; i < w.size(); ++i) {
    if (w(i) <= 0.0) continue;
    const double factor = psi(i) - beta;
    if (!(factor > 0.0)) {
      offending = psi(i);
      return false;
    }
    out(i) = w(i) * factor;
  }
  out /= out.sum();
  return true;
}

Vector project_initial(const Design& initial, const Vector& grid) {
  Vector w = Vector::Zero(grid.size());
  for (Index i = 0; i < initial.size(); ++i) {
    const double x = initial.support()(i);
    Index j = static_cast<Index>(std::lower_bound(grid.data(), grid.data() + grid.size(), x) - grid.data());
    if (j == grid.size() || (j > 0 && x - grid(j - 1) < grid(j) - x)) --j;
    w(j) += initial.weights()(i);
  }
  return w / w.sum();
}

}  // namespace

Vector psi_values(const Design& design, const RegressionBasis& basis, const CovarianceKernel& kernel,
                  const Criterion& criterion, const MomentOptions& options) {
  return GridEngine(design, basis, kernel, criterion, options).evaluate(design.weights()).psi;
}

Design multiplicative_step(const Design& design, const RegressionBasis& basis, const CovarianceKernel& kernel,
                           const Criterion& criterion, double beta, const MomentOptions& options) {
  Vector psi = GridEngine::usable_psi(psi_values(design, basis, kernel, criterion, options));
  Vector w;
  double offending = 0.0;
  if (!reweight(design.weights(), psi, beta, w, offending))
    throw StepRejectedError("update factor psi - beta is not positive (psi = " + std::to_string(offending) +
                                ", beta = " + std::to_string(beta) + ")",
                            offending);
  return design.with_weights(w);
}

SolveResult solve(const RegressionBasis& basis, const CovarianceKernel& kernel, const Criterion& criterion,
                  const SolverConfig& config, const std::optional<Design>& initial) {
  if (config.grid_n < 2 * basis.size() + 1) throw ConfigError("grid_n must be at least 2m + 1");
  if (config.max_iter < 0) throw ConfigError("max_iter must be nonnegative");
  if (!(config.conv_tol > 0)) throw ConfigError("conv_tol must be positive");
  if (const auto* a = std::get_if<AdaptiveMin>(&config.beta_rule); a && !(a->margin > 0))
    throw ConfigError("AdaptiveMin margin must be positive");

  const Vector grid = equispaced(config.grid_n, basis.domain());
  Design grid_design = Design::equal_weights(grid);
  MomentOptions options = config.moments;
  if (kernel.singular_on_diagonal() && options.policy == DiagonalPolicy::Smooth && !options.smoothing_halfwidth)
    options.smoothing_halfwidth = half_min_gap(grid);

  GridEngine engine(grid_design, basis, kernel, criterion, options);
  Vector w0 = initial ? project_initial(*initial, grid) : grid_design.weights();
  GridEngine::State state = engine.evaluate(w0);

  SolveResult result{grid_design, grid_design, {}, {}, false, 0, 0, 0, 0, 0, options};
  GridEngine::State best = state;
  double best_dev = deviation(state.w, state.psi, config.weight_floor);
  double margin = std::holds_alternative<AdaptiveMin>(config.beta_rule)
                      ? std::get<AdaptiveMin>(config.beta_rule).margin
                      : 0.0;
  int iter = 0;
  for (;; ++iter) {
    const double dev = deviation(state.w, state.psi, config.weight_floor);
    if (state.criterion < best.criterion) {
      best = state;
      best_dev = dev;
    }
    if (dev <= config.conv_tol) {
      result.converged = true;
      best = state;
      best_dev = dev;
      break;
    }
    if (iter >= config.max_iter) break;
    const Vector psi = GridEngine::usable_psi(state.psi);
    double psi_min = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < psi.size(); ++i)
      if (state.w(i) > 0.0) psi_min = std::min(psi_min, psi(i));

    Vector w_new;
    double beta = 0.0, offending = 0.0;
    GridEngine::State next;
    if (const auto* fixed = std::get_if<FixedBeta>(&config.beta_rule)) {
      beta = fixed->beta;
      int retries = 0;
      while (!reweight(state.w, psi, beta, w_new, offending)) {
        if (++retries > 30) throw StepRejectedError("step rejected after 30 retries", offending);
        ++result.rejected_steps;
        beta = psi_min - 0.5 * std::max(beta - psi_min, 1e-6);
      }
      next = engine.evaluate(w_new);
      if (next.criterion > state.criterion + 1e-8 * std::max(1.0, std::abs(state.criterion)))
        ++result.monotonicity_warnings;
    } else {
      for (;;) {
        beta = psi_min - margin;
        reweight(state.w, psi, beta, w_new, offending);
        next = engine.evaluate(w_new);
        const bool worse = next.criterion > state.criterion + 1e-10 * (1.0 + std::abs(state.criterion));
        if (!config.backtrack || !worse || margin > 1e6) break;
        ++result.rejected_steps;
        margin *= 2.0;
      }
      if (next.criterion > state.criterion + 1e-8 * std::max(1.0, std::abs(state.criterion)))
        ++result.monotonicity_warnings;
      margin = std::max(margin / 1.5, 1e-3);
    }
    result.trace.push_back({iter, state.criterion, dev, beta});
    state = std::move(next);
  }
  result.trace.push_back({iter, state.criterion, deviation(state.w, state.psi, config.weight_floor), kNaN});
  result.iterations = iter;
  result.final_deviation = best_dev;
  result.criterion = best.criterion;
  result.grid_design = grid_design.with_weights(best.w);
  result.design = result.grid_design.pruned(config.weight_floor);
  result.report = necessary_condition_check(result.design, basis, kernel, criterion, grid, config.check_tol, options);
  return result;
}

double efficiency(const Design& design, const Design& reference_opt, const RegressionBasis& basis,
                  const CovarianceKernel& kernel, const MomentOptions& options) {
  const double ld = spd_logdet(cov_matrix(design, basis, kernel, options).D);
  const double lr = spd_logdet(cov_matrix(reference_opt, basis, kernel, options).D);
  return std::exp((lr - ld) / basis.size());
}

}  // namespace corrdesign
