#include "corrdesign/experiments.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace corrdesign {

namespace {

struct Published {
  std::string label;
  double parameter;
  double value;
};

SolverConfig table_solver(const TableOptions& o) {
  SolverConfig c;
  c.grid_n = o.grid_n;
  c.max_iter = o.max_iter;
  c.conv_tol = o.conv_tol;
  return c;
}

TableRow compare(const Published& p, const Design& design, const SolveResult& opt, const RegressionBasis& basis,
                 const CovarianceKernel& kernel) {
  TableRow row;
  row.label = p.label;
  row.parameter = p.parameter;
  row.published = p.value;
  row.computed = efficiency(design, opt.grid_design, basis, kernel, opt.moments);
  row.delta = row.computed - row.published;
  row.converged = opt.converged;
  row.optimum_passes_check = opt.report.pass();
  row.iterations = opt.iterations;
  return row;
}

TableResult table1(const TableOptions& o) {
  TableResult t{1, "D-efficiency of the two-point design {-1, 1}, exponential kernel", 0.005, {}};
  const std::vector<double> lambdas{0.1, 0.3, 0.5, 0.7, 0.9};
  const std::vector<std::vector<double>> published{{0.999, 0.997, 0.978, 0.946, 0.905},
                                                   {0.999, 0.999, 0.991, 0.974, 0.950}};
  const std::vector<std::string> labels{"constant", "linear"};
  for (int m = 1; m <= 2; ++m) {
    const auto basis = RegressionBasis::monomial(m);
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
      const auto kernel = CovarianceKernel::exponential(lambdas[j]);
      const auto opt = solve(basis, kernel, Criterion::d_optimal(), table_solver(o));
      t.rows.push_back(compare({labels[m - 1], lambdas[j], published[m - 1][j]}, two_point_design(), opt, basis, kernel));
    }
  }
  return t;
}

TableResult table2(const TableOptions& o) {
  TableResult t{2, "D-efficiency of the arcsine design, quadratic model, smoothed logarithmic kernel", 0.01, {}};
  const std::vector<double> published{0.998, 0.978, 0.966, 0.949, 0.936};
  const auto basis = RegressionBasis::monomial(3);
  const Design arcsine = quadrature_design(arcsine_design(), o.continuous_n);
  for (std::size_t j = 0; j < published.size(); ++j) {
    const double delta = table2_deltas()[j];
    const auto kernel = CovarianceKernel::smoothed_log(delta);
    const auto opt = solve(basis, kernel, Criterion::d_optimal(), table_solver(o));
    t.rows.push_back(compare({"arcsine", delta, published[j]}, arcsine, opt, basis, kernel));
  }
  return t;
}

TableResult table3(const TableOptions& o) {
  TableResult t{3, "D-efficiency of the uniform and arcsine designs, exponential kernel", 0.01, {}};
  const std::vector<double> lambdas{0.5, 1.5, 2.5, 3.5, 4.5, 5.5};
  const std::vector<std::vector<double>> uniform{{0.913, 0.888, 0.903, 0.919, 0.933, 0.944},
                                                 {0.857, 0.832, 0.847, 0.867, 0.886, 0.901},
                                                 {0.832, 0.816, 0.826, 0.842, 0.860, 0.876},
                                                 {0.826, 0.818, 0.823, 0.835, 0.849, 0.864}};
  const std::vector<std::vector<double>> arcsine{{0.966, 0.979, 0.987, 0.980, 0.968, 0.954},
                                                 {0.942, 0.954, 0.970, 0.975, 0.973, 0.966},
                                                 {0.934, 0.938, 0.954, 0.968, 0.976, 0.981},
                                                 {0.934, 0.936, 0.945, 0.957, 0.967, 0.975}};
  const Design u = quadrature_design(uniform_density(), o.continuous_n);
  const Design a = quadrature_design(arcsine_design(), o.continuous_n);
  for (int m = 1; m <= 4; ++m) {
    const auto basis = RegressionBasis::monomial(m);
    const std::string suffix = " m=" + std::to_string(m);
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
      const auto kernel = CovarianceKernel::exponential(lambdas[j]);
      const auto opt = solve(basis, kernel, Criterion::d_optimal(), table_solver(o));
      t.rows.push_back(compare({"uniform" + suffix, lambdas[j], uniform[m - 1][j]}, u, opt, basis, kernel));
      t.rows.push_back(compare({"arcsine" + suffix, lambdas[j], arcsine[m - 1][j]}, a, opt, basis, kernel));
    }
  }
  return t;
}

std::string fixed(double v) {
  std::ostringstream s;
  s << std::setprecision(3) << v;
  return s.str();
}

// b and d (= phi for the D-criterion) of the quadratic model under three
// kernels, arcsine design.
std::vector<FigureData> figure1(const FigureOptions& o) {
  const auto basis = RegressionBasis::monomial(3);
  const Design design = quadrature_design(arcsine_design(), o.design_n);
  const Vector grid = equispaced(o.grid_n);
  MomentOptions cell;
  cell.policy = DiagonalPolicy::Cell;
  const std::vector<std::pair<std::string, CovarianceKernel>> kernels{
      {"exponential", CovarianceKernel::exponential(1.0)},
      {"triangular", CovarianceKernel::triangular(1.0)},
      {"logarithmic", CovarianceKernel::logarithmic()}};
  FigureData data{"figure1", {"x"}, Matrix(grid.size(), 1 + 2 * kernels.size())};
  data.values.col(0) = grid;
  for (std::size_t k = 0; k < kernels.size(); ++k) {
    const Sensitivity s(design, basis, kernels[k].second, Criterion::d_optimal(), cell);
    data.columns.push_back("b_" + kernels[k].first);
    data.columns.push_back("d_" + kernels[k].first);
    for (Index i = 0; i < grid.size(); ++i) {
      const auto p = s.at(grid(i));
      data.values(i, 1 + 2 * k) = p.b;
      data.values(i, 2 + 2 * k) = p.d;
    }
  }
  return {data};
}

FigureData b_phi_panel(const std::string& name, const Design& design, const Vector& c, const Vector& grid) {
  const auto basis = RegressionBasis::monomial(3);
  const Sensitivity s(design, basis, CovarianceKernel::triangular(1.0), Criterion::c_optimal(c));
  FigureData data{name, {"x", "b", "phi", "r"}, Matrix(grid.size(), 4)};
  for (Index i = 0; i < grid.size(); ++i) {
    const auto p = s.at(grid(i));
    data.values.row(i) << grid(i), p.b, p.phi, p.r;
  }
  return data;
}

std::vector<FigureData> figure3(const FigureOptions& o) {
  const Vector grid = equispaced(o.grid_n);
  const Design three = Design::equal_weights(Vector::LinSpaced(3, -1.0, 1.0));
  const Vector c_a = (Vector(3) << 1, 0, 1).finished();
  const Vector c_b = (Vector(3) << 1, 0, 0).finished();
  SolverConfig config;
  config.grid_n = o.solver_grid_n;
  config.max_iter = o.max_iter;
  const auto opt = solve(RegressionBasis::monomial(3), CovarianceKernel::triangular(1.0), Criterion::c_optimal(c_b),
                         config);
  FigureData design{"figure3c_design", {"x", "weight"}, Matrix(opt.design.size(), 2)};
  design.values.col(0) = opt.design.support();
  design.values.col(1) = opt.design.weights();
  return {b_phi_panel("figure3a", three, c_a, grid), b_phi_panel("figure3b", three, c_b, grid),
          b_phi_panel("figure3c", opt.design, c_b, grid), design};
}

std::vector<FigureData> figure4(const FigureOptions& o) {
  const Vector t = Vector::LinSpaced(o.grid_n, 0.0, 0.5);
  const auto& deltas = figure5_deltas();
  FigureData data{"figure4", {"t", "log_kernel"}, Matrix(t.size(), 2 + deltas.size())};
  for (double d : deltas) data.columns.push_back("rho_" + fixed(d));
  const auto log_kernel = CovarianceKernel::logarithmic();
  for (Index i = 0; i < t.size(); ++i) {
    data.values(i, 0) = t(i);
    data.values(i, 1) = i == 0 ? std::numeric_limits<double>::infinity() : log_kernel.at_lag(t(i));
    for (std::size_t j = 0; j < deltas.size(); ++j) data.values(i, 2 + j) = smoothed_log(deltas[j], t(i));
  }
  return {data};
}

std::vector<FigureData> figure5(const FigureOptions& o) {
  const auto basis = RegressionBasis::monomial(3);
  const auto arcsine = arcsine_design();
  const auto& deltas = figure5_deltas();
  SolverConfig config;
  config.grid_n = o.solver_grid_n;
  config.max_iter = o.max_iter;
  const Vector grid = equispaced(o.solver_grid_n);
  FigureData curves{"figure5", {"x", "arcsine_density", "arcsine_cdf"},
                    Matrix(grid.size(), 3 + 3 * deltas.size())};
  FigureData summary{"figure5_summary",
                     {"delta", "cell_edge_distance", "kolmogorov_distance", "converged", "iterations"},
                     Matrix(deltas.size(), 5)};
  for (Index i = 0; i < grid.size(); ++i) {
    const double x = grid(i);
    curves.values(i, 0) = x;
    curves.values(i, 1) = std::abs(x) < 1.0 ? arcsine.density(x) : std::numeric_limits<double>::infinity();
    curves.values(i, 2) = arcsine.cdf(x);
  }
  for (std::size_t j = 0; j < deltas.size(); ++j) {
    const std::string tag = fixed(deltas[j]);
    curves.columns.insert(curves.columns.end(), {"weight_" + tag, "density_" + tag, "cdf_" + tag});
    const auto opt = solve(basis, CovarianceKernel::smoothed_log(deltas[j]), Criterion::d_optimal(), config);
    const Design& g = opt.grid_design;
    double cdf = 0.0;
    for (Index i = 0; i < g.size(); ++i) {
      cdf += g.weights()(i);
      curves.values(i, 3 + 3 * j) = g.weights()(i);
      curves.values(i, 4 + 3 * j) = g.weights()(i) / g.cell_width(i);
      curves.values(i, 5 + 3 * j) = cdf;
    }
    summary.values.row(j) << deltas[j], cell_edge_distance(opt.grid_design, arcsine),
        kolmogorov_distance(opt.design, arcsine), opt.converged ? 1.0 : 0.0, double(opt.iterations);
  }
  return {curves, summary};
}

}  // namespace

int TableResult::within_tolerance() const {
  int n = 0;
  for (const auto& r : rows) n += std::abs(r.delta) <= tolerance + 1e-12;
  return n;
}

const std::vector<double>& table2_deltas() {
  static const std::vector<double> d{0.02, 0.04, 0.06, 0.08, 0.1};
  return d;
}

const std::vector<double>& figure5_deltas() {
  static const std::vector<double> d{0.02, 0.05, 0.1};
  return d;
}

TableResult run_table(int id, const TableOptions& options) {
  switch (id) {
    case 1:
      return table1(options);
    case 2:
      return table2(options);
    case 3:
      return table3(options);
  }
  throw ConfigError("unknown table " + std::to_string(id) + " (expected 1, 2 or 3)");
}

void write_table_csv(std::ostream& out, const TableResult& table) {
  out << "label,parameter,published,computed,delta,within_tolerance,converged,iterations,optimum_passes_check\n";
  out << std::setprecision(6);
  for (const auto& r : table.rows)
    out << r.label << "," << r.parameter << "," << r.published << "," << r.computed << "," << r.delta << ","
        << (std::abs(r.delta) <= table.tolerance + 1e-12 ? "true" : "false") << ","
        << (r.converged ? "true" : "false") << "," << r.iterations << ","
        << (r.optimum_passes_check ? "true" : "false") << "\n";
}

std::vector<FigureData> run_figure(int id, const FigureOptions& options) {
  switch (id) {
    case 1:
      return figure1(options);
    case 3:
      return figure3(options);
    case 4:
      return figure4(options);
    case 5:
      return figure5(options);
  }
  throw ConfigError("unknown figure " + std::to_string(id) + " (expected 1, 3, 4 or 5)");
}

void write_figure_csv(std::ostream& out, const FigureData& data) {
  for (std::size_t j = 0; j < data.columns.size(); ++j) out << (j ? "," : "") << data.columns[j];
  out << "\n" << std::setprecision(12);
  for (Index i = 0; i < data.values.rows(); ++i) {
    for (Index j = 0; j < data.values.cols(); ++j) {
      if (j) out << ",";
      const double v = data.values(i, j);
      if (std::isfinite(v)) out << v;
      else if (std::isinf(v)) out << (v > 0 ? "inf" : "-inf");
    }
    out << "\n";
  }
}

}  // namespace corrdesign
