#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "corrdesign/oracle.hpp"
#include "corrdesign/solver.hpp"
#include "corrdesign/spectral.hpp"

namespace corrdesign {

using Json = nlohmann::json;

inline constexpr const char* kSchema = "corrdesign/1";

Json to_json(const Matrix& A);  // row-major nested arrays
Json to_json(const Vector& v);
// NaN and infinities become null.
Json number_or_null(double v);
Json to_json(const Design& design);
Json to_json(const CovarianceKernel& kernel);
Json to_json(const RegressionBasis& basis);
Json to_json(const Criterion& criterion);
Json to_json(const OptimalityReport& report, bool include_samples = true);
Json to_json(const UniversalReport& report);
Json to_json(const SimulationResult& result);
Json to_json(const MercerResidual& residual);
Json to_json(const SolverConfig& config);

// {"family": "...", "params": {...}}; periodic terms as
// params.terms = [[c, k, p], ...]; tabulated kernels as {"file": "k.csv"}.
CovarianceKernel kernel_from_json(const Json& j);
// {"family": "monomial", "m": 3} or {"family": "monomial", "powers": [1]},
// "chebyshev", "gegenbauer" (with "lambda"), "cosine" (with "indices"),
// "tabulated" (with "file", columns x,f1,...,fm). Optional "domain": [a, b].
RegressionBasis basis_from_json(const Json& j);
// {"kind": "D"} or {"kind": "c", "c": [...]}
Criterion criterion_from_json(const Json& j, int m);
MomentOptions moment_options_from_json(const Json& j);
SolverConfig solver_config_from_json(const Json& j);

// Named designs: "arcsine", "uniform", "two_point", "gen_arcsine:<alpha>",
// "triangular:<lambda>", "grid:<n>"; continuous ones are discretized with
// `n` atoms by "quadrature" (default) or "quantile". Anything else is read as
// a CSV file with columns x,weight.
Design design_from_name(const std::string& spec, int n = 401, const std::string& method = "quadrature");
// {"name": "...", "n": 401, "method": "quadrature"} or {"file": "..."}.
Design design_from_json(const Json& j);

Design read_design_csv(std::istream& in);
Design read_design_csv_file(const std::string& path);
void write_design_csv(std::ostream& out, const Design& design);
CovarianceKernel read_kernel_csv_file(const std::string& path);
RegressionBasis read_basis_csv_file(const std::string& path);

// Columns x, phi, b, d, psi, r, g1..gm.
void write_report_csv(std::ostream& out, const OptimalityReport& report);
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace corrdesign
