#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "corrdesign/solver.hpp"

namespace corrdesign {

struct TableOptions {
  int grid_n = 201;
  int max_iter = 20000;
  double conv_tol = 1e-7;
  // Atoms used to discretize the continuous competitor designs.
  int continuous_n = 2000;
};

struct TableRow {
  std::string label;
  double parameter = 0;
  double published = 0;
  double computed = 0;
  double delta = 0;
  bool converged = false;
  int iterations = 0;
  // The reference optimum passes the necessary-condition check.
  bool optimum_passes_check = false;
};

struct TableResult {
  int id = 0;
  std::string title;
  double tolerance = 0;
  std::vector<TableRow> rows;
  int within_tolerance() const;
};

// Recomputes a published efficiency table with the solver optimum (grid
// design) as the reference.
//   1: two-point design {-1, 1}, exponential kernel, constant and linear model
//   2: arcsine design, quadratic model, smoothed logarithmic kernel
//   3: uniform and arcsine designs, exponential kernel, m = 1..4
TableResult run_table(int id, const TableOptions& options = {});
void write_table_csv(std::ostream& out, const TableResult& table);

struct FigureData {
  std::string name;  // file stem
  std::vector<std::string> columns;
  Matrix values;     // one row per sample
};

struct FigureOptions {
  int grid_n = 401;         // evaluation grid
  int design_n = 401;       // atoms of the discretized arcsine design
  int solver_grid_n = 201;
  int max_iter = 20000;
};

// Plot-ready data for the figures:
//   1: b and d for the arcsine design, quadratic model, three kernels
//   3: b and phi for {-1, 0, 1; 1/3} and for the c-optimal design
//   4: smoothed logarithmic kernels against -ln t^2
//   5: solver optima under smoothed logarithmic kernels against the arcsine law
std::vector<FigureData> run_figure(int id, const FigureOptions& options = {});
void write_figure_csv(std::ostream& out, const FigureData& data);

// Delta values of the smoothed-log table and figure.
const std::vector<double>& table2_deltas();
const std::vector<double>& figure5_deltas();

}  // namespace corrdesign
