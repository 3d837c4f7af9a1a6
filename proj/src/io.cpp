#include "corrdesign/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace corrdesign {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

double parse_number(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number '" + s + "' in " + where);
  }
}

// Rows of numbers from a CSV stream whose first line is a header.
std::vector<std::vector<double>> read_numeric_csv(std::istream& in, std::size_t min_cols, const std::string& what,
                                                  std::vector<std::string>* header = nullptr) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(what + " is empty");
  if (header) *header = split_csv_line(line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() < min_cols) throw ConfigError(what + " has a row with fewer than " + std::to_string(min_cols) + " columns");
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_number(c, what));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError(what + " has no data rows");
  return rows;
}

std::ifstream open_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file '" + path + "'");
  return in;
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

double param(const Json& p, const char* key, double fallback) { return get_or<double>(p, key, fallback); }

double required_param(const Json& p, const char* key, const std::string& family) {
  if (!p.contains(key)) throw ConfigError(family + " kernel needs parameter '" + key + "'");
  return get_or<double>(p, key, 0.0);
}

Interval domain_from_json(const Json& j, Interval fallback) {
  if (!j.contains("domain")) return fallback;
  auto d = get_or<std::vector<double>>(j, "domain", {});
  if (d.size() != 2) throw ConfigError("domain must be [a, b]");
  return {d[0], d[1]};
}

}  // namespace

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json to_json(const Matrix& A) {
  Json rows = Json::array();
  for (Index i = 0; i < A.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < A.cols(); ++j) row.push_back(number_or_null(A(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(number_or_null(v(i)));
  return out;
}

Json to_json(const Design& design) {
  return {{"support", to_json(design.support())}, {"weights", to_json(design.weights())}};
}

Json to_json(const CovarianceKernel& kernel) {
  Json p = Json::object();
  for (const auto& [k, v] : kernel.params()) p[k] = v;
  if (kernel.family() == KernelFamily::PeriodicCosMix) {
    Json terms = Json::array();
    for (const auto& t : kernel.terms()) terms.push_back({t.weight, t.frequency, t.power});
    p["terms"] = terms;
  }
  Json j = {{"family", to_string(kernel.family())}, {"params", p}};
  if (kernel.family() == KernelFamily::Tabulated) {
    j["nodes"] = to_json(kernel.table_nodes());
    j["values"] = to_json(kernel.table_values());
  }
  return j;
}

Json to_json(const RegressionBasis& basis) {
  Json j = {{"family", to_string(basis.family())}, {"m", basis.size()},
            {"domain", {basis.domain().lo, basis.domain().hi}}};
  if (basis.family() == BasisFamily::Monomial) j["powers"] = basis.powers();
  if (basis.family() == BasisFamily::Gegenbauer) j["lambda"] = basis.gegenbauer_parameter();
  if (basis.family() == BasisFamily::CosineSeries) j["indices"] = basis.indices();
  return j;
}

Json to_json(const Criterion& criterion) {
  if (criterion.kind == Criterion::Kind::D) return {{"kind", "D"}};
  return {{"kind", "c"}, {"c", to_json(criterion.c)}};
}

Json to_json(const OptimalityReport& report, bool include_samples) {
  Json verdicts = Json::array();
  for (const auto& v : report.verdicts)
    verdicts.push_back({{"check", v.name}, {"pass", v.pass}, {"value", number_or_null(v.value)}, {"tolerance", v.tolerance}});
  Json j = {{"criterion", report.criterion},
            {"pass", report.pass()},
            {"scale", report.scale},
            {"max_violation", number_or_null(report.max_violation)},
            {"max_relative_violation", number_or_null(report.max_relative_violation)},
            {"support_deviation", number_or_null(report.support_deviation)},
            {"orthogonality_residual", report.orthogonality_residual},
            {"identity",
             {{"int_phi", report.identity.int_phi},
              {"int_b", report.identity.int_b},
              {"trace_DC", report.identity.trace_DC},
              {"phi_vs_b", report.identity.phi_vs_b},
              {"phi_vs_trace", report.identity.phi_vs_trace}}},
            {"verdicts", verdicts}};
  if (include_samples) {
    j["grid"] = to_json(report.grid);
    j["phi"] = to_json(report.phi);
    j["b"] = to_json(report.b);
    j["d"] = to_json(report.d);
    j["psi"] = to_json(report.psi);
    j["r"] = to_json(report.r);
    j["g"] = to_json(report.g);
  }
  return j;
}

Json to_json(const UniversalReport& report) {
  return {{"verdict", to_string(report.verdict)},
          {"reason", report.reason},
          {"scale", report.scale},
          {"sup_g", report.sup_g},
          {"support_g", report.support_g},
          {"max_sine", report.max_sine},
          {"min_gamma", report.min_gamma},
          {"refuting_point", report.refuting_point},
          {"orthogonality_residual", report.orthogonality_residual},
          {"Lambda", to_json(report.Lambda)},
          {"Lambda_eigenvalues", to_json(report.Lambda_eigenvalues)},
          {"grid", to_json(report.grid)},
          {"gamma", to_json(report.gamma)},
          {"g", to_json(report.g)}};
}

Json to_json(const SimulationResult& result) {
  return {{"empirical", to_json(result.empirical)},
          {"exact", to_json(result.exact)},
          {"standard_error", to_json(result.standard_error)},
          {"z", to_json(result.z)},
          {"max_abs_z", number_or_null(result.max_abs_z)},
          {"jitter", result.jitter},
          {"within_5_se", result.within(5.0)}};
}

Json to_json(const MercerResidual& residual) {
  return {{"max_residual", residual.max_residual},
          {"relative_residual", residual.relative_residual},
          {"empirical_eigenvalue", residual.empirical_eigenvalue},
          {"reference_point", residual.reference_point},
          {"quadrature_error", residual.quadrature_error}};
}

Json to_json(const SolverConfig& config) {
  Json beta;
  if (const auto* f = std::get_if<FixedBeta>(&config.beta_rule))
    beta = {{"rule", "fixed"}, {"beta", f->beta}};
  else
    beta = {{"rule", "adaptive"}, {"margin", std::get<AdaptiveMin>(config.beta_rule).margin}};
  Json j = {{"grid_n", config.grid_n},           {"beta", beta},
            {"max_iter", config.max_iter},       {"conv_tol", config.conv_tol},
            {"weight_floor", config.weight_floor}, {"backtrack", config.backtrack},
            {"policy", to_string(config.moments.policy)}, {"check_tol", config.check_tol}};
  if (config.moments.smoothing_halfwidth) j["smoothing_halfwidth"] = *config.moments.smoothing_halfwidth;
  return j;
}

CovarianceKernel kernel_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("family")) throw ConfigError("kernel block needs a 'family'");
  const std::string family = get_or<std::string>(j, "family", "");
  const Json p = j.contains("params") ? j.at("params") : Json::object();
  if (!p.is_object()) throw ConfigError("kernel 'params' must be an object");
  const KernelFamily f = kernel_family_from_string(family);
  CovarianceKernel k = [&]() {
    switch (f) {
      case KernelFamily::Exponential:
        return CovarianceKernel::exponential(required_param(p, "lambda", family));
      case KernelFamily::Gaussian:
        return CovarianceKernel::gaussian(required_param(p, "lambda", family));
      case KernelFamily::Triangular:
        return CovarianceKernel::triangular(required_param(p, "lambda", family));
      case KernelFamily::Spherical:
        return CovarianceKernel::spherical(required_param(p, "R", family));
      case KernelFamily::PowerExp:
        return CovarianceKernel::power_exponential(required_param(p, "lambda", family), required_param(p, "nu", family));
      case KernelFamily::Logarithmic:
        return CovarianceKernel::logarithmic(param(p, "beta", 1.0), param(p, "gamma", 0.0));
      case KernelFamily::PowerSingular:
        return CovarianceKernel::power_singular(required_param(p, "alpha", family), param(p, "beta", 1.0),
                                                param(p, "gamma", 0.0), param(p, "h", 0.0));
      case KernelFamily::SmoothedLog:
        return CovarianceKernel::smoothed_log(required_param(p, "delta", family), param(p, "beta", 1.0),
                                              param(p, "gamma", 0.0));
      case KernelFamily::BrownianMin:
        return CovarianceKernel::brownian_min();
      case KernelFamily::PeriodicCosMix: {
        if (!p.contains("terms")) return CovarianceKernel::periodic_default();
        std::vector<CosineTerm> terms;
        for (const auto& t : p.at("terms")) {
          if (!t.is_array() || t.size() < 2) throw ConfigError("periodic term must be [c, k] or [c, k, p]");
          terms.push_back({t[0].get<double>(), t[1].get<int>(), t.size() > 2 ? t[2].get<int>() : 1});
        }
        return CovarianceKernel::periodic_cos_mix(std::move(terms));
      }
      case KernelFamily::Tabulated: {
        if (j.contains("file")) return read_kernel_csv_file(get_or<std::string>(j, "file", ""));
        if (p.contains("constant")) return CovarianceKernel::constant(param(p, "constant", 1.0));
        throw ConfigError("tabulated kernel needs a 'file' or params.constant");
      }
    }
    throw ConfigError("unhandled kernel family");
  }();
  if (p.contains("scale")) k = k.scaled(param(p, "scale", 1.0));
  return k;
}

RegressionBasis basis_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("family")) throw ConfigError("basis block needs a 'family'");
  const std::string family = get_or<std::string>(j, "family", "");
  if (family == "monomial") {
    if (j.contains("powers"))
      return RegressionBasis::monomial_powers(get_or<std::vector<int>>(j, "powers", {}), domain_from_json(j, {}));
    return RegressionBasis::monomial(get_or<int>(j, "m", 0), domain_from_json(j, {}));
  }
  if (family == "chebyshev") return RegressionBasis::chebyshev(get_or<int>(j, "m", 0), domain_from_json(j, {}));
  if (family == "gegenbauer")
    return RegressionBasis::gegenbauer(get_or<int>(j, "m", 0), get_or<double>(j, "lambda", 0.0),
                                       domain_from_json(j, {}));
  if (family == "cosine")
    return RegressionBasis::cosine_series(get_or<std::vector<int>>(j, "indices", {}), domain_from_json(j, {0.0, 1.0}));
  if (family == "tabulated") return read_basis_csv_file(get_or<std::string>(j, "file", ""));
  throw ConfigError("unknown basis family '" + family + "'");
}

Criterion criterion_from_json(const Json& j, int m) {
  const std::string kind = j.is_object() ? get_or<std::string>(j, "kind", "D") : "D";
  if (kind == "D" || kind == "d") return Criterion::d_optimal();
  if (kind == "c") {
    auto c = get_or<std::vector<double>>(j, "c", {});
    if (static_cast<int>(c.size()) != m) throw ConfigError("c vector must have m entries");
    return Criterion::c_optimal(Eigen::Map<Vector>(c.data(), m));
  }
  throw ConfigError("unknown criterion kind '" + kind + "'");
}

MomentOptions moment_options_from_json(const Json& j) {
  MomentOptions o;
  if (!j.is_object()) return o;
  if (j.contains("policy")) o.policy = diagonal_policy_from_string(get_or<std::string>(j, "policy", "smooth"));
  if (j.contains("smoothing_halfwidth")) {
    const double h = get_or<double>(j, "smoothing_halfwidth", 0.0);
    if (!(h > 0)) throw ConfigError("smoothing_halfwidth must be positive");
    o.smoothing_halfwidth = h;
  }
  o.condition_limit = get_or<double>(j, "condition_limit", o.condition_limit);
  return o;
}

SolverConfig solver_config_from_json(const Json& j) {
  SolverConfig c;
  if (!j.is_object()) return c;
  c.grid_n = get_or<int>(j, "grid_n", c.grid_n);
  c.max_iter = get_or<int>(j, "max_iter", c.max_iter);
  c.conv_tol = get_or<double>(j, "conv_tol", c.conv_tol);
  c.weight_floor = get_or<double>(j, "weight_floor", c.weight_floor);
  c.backtrack = get_or<bool>(j, "backtrack", c.backtrack);
  c.check_tol = get_or<double>(j, "check_tol", c.check_tol);
  if (j.contains("beta")) {
    const Json& b = j.at("beta");
    if (b.is_number()) {
      c.beta_rule = FixedBeta{b.get<double>()};
    } else if (b.is_string() && b.get<std::string>() == "adaptive") {
      c.beta_rule = AdaptiveMin{get_or<double>(j, "margin", 0.1)};
    } else {
      throw ConfigError("solver 'beta' must be a number or \"adaptive\"");
    }
  } else if (j.contains("margin")) {
    c.beta_rule = AdaptiveMin{get_or<double>(j, "margin", 0.1)};
  }
  c.moments = moment_options_from_json(j);
  return c;
}

Design design_from_name(const std::string& spec, int n, const std::string& method) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto discretize = [&](const DensityDesign& dd) {
    if (method == "quadrature") return quadrature_design(dd, n);
    if (method == "quantile") return quantile_design(dd, n);
    throw ConfigError("unknown discretization '" + method + "'");
  };
  if (name == "arcsine") return discretize(arcsine_design());
  if (name == "uniform") return discretize(uniform_density());
  if (name == "two_point") return two_point_design();
  if (name == "gen_arcsine") return discretize(generalized_arcsine_design(parse_number(arg, "design name")));
  if (name == "triangular") return triangular_lattice_design(parse_number(arg, "design name"));
  if (name == "grid") return uniform_grid_design(static_cast<int>(parse_number(arg, "design name")));
  return read_design_csv_file(spec);
}

Design design_from_json(const Json& j) {
  if (j.is_string()) return design_from_name(j.get<std::string>());
  if (!j.is_object()) throw ConfigError("design block must be a name or an object");
  if (j.contains("file")) return read_design_csv_file(get_or<std::string>(j, "file", ""));
  if (j.contains("support")) {
    auto x = get_or<std::vector<double>>(j, "support", {});
    auto w = get_or<std::vector<double>>(j, "weights", {});
    if (x.size() != w.size()) throw ConfigError("design support and weights differ in length");
    return Design(Eigen::Map<Vector>(x.data(), static_cast<Index>(x.size())),
                  Eigen::Map<Vector>(w.data(), static_cast<Index>(w.size())));
  }
  return design_from_name(get_or<std::string>(j, "name", ""), get_or<int>(j, "n", 401),
                          get_or<std::string>(j, "method", "quadrature"));
}

Design read_design_csv(std::istream& in) {
  auto rows = read_numeric_csv(in, 2, "design CSV");
  Vector x(rows.size()), w(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    x(i) = rows[i][0];
    w(i) = rows[i][1];
  }
  return Design(x, w);
}

Design read_design_csv_file(const std::string& path) {
  auto in = open_file(path);
  return read_design_csv(in);
}

void write_design_csv(std::ostream& out, const Design& design) {
  out << "x,weight\n" << std::setprecision(17);
  for (Index i = 0; i < design.size(); ++i) out << design.support()(i) << "," << design.weights()(i) << "\n";
}

CovarianceKernel read_kernel_csv_file(const std::string& path) {
  auto in = open_file(path);
  auto rows = read_numeric_csv(in, 3, "kernel CSV '" + path + "'");
  std::vector<std::array<double, 3>> triples;
  for (const auto& r : rows) triples.push_back({r[0], r[1], r[2]});
  return CovarianceKernel::tabulated_from_triples(triples);
}

RegressionBasis read_basis_csv_file(const std::string& path) {
  auto in = open_file(path);
  auto rows = read_numeric_csv(in, 2, "basis CSV '" + path + "'");
  const Index n = static_cast<Index>(rows.size()), m = static_cast<Index>(rows[0].size()) - 1;
  Vector x(n);
  Matrix F(n, m);
  for (Index i = 0; i < n; ++i) {
    if (static_cast<Index>(rows[i].size()) != m + 1) throw ConfigError("basis CSV rows differ in length");
    x(i) = rows[i][0];
    for (Index k = 0; k < m; ++k) F(i, k) = rows[i][k + 1];
  }
  return RegressionBasis::tabulated(x, F);
}

void write_report_csv(std::ostream& out, const OptimalityReport& report) {
  out << "x,phi,b,d,psi,r";
  for (Index k = 0; k < report.g.cols(); ++k) out << ",g" << (k + 1);
  out << "\n" << std::setprecision(12);
  auto cell = [&](double v) {
    if (std::isfinite(v)) out << v;
  };
  for (Index i = 0; i < report.grid.size(); ++i) {
    out << report.grid(i);
    for (double v : {report.phi(i), report.b(i), report.d(i), report.psi(i), report.r(i)}) {
      out << ",";
      cell(v);
    }
    for (Index k = 0; k < report.g.cols(); ++k) {
      out << ",";
      cell(report.g(i, k));
    }
    out << "\n";
  }
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "iter,criterion,max_psi_dev,beta\n" << std::setprecision(15);
  for (const auto& t : trace) {
    out << t.iter << "," << t.criterion << "," << t.max_psi_dev << ",";
    if (std::isfinite(t.beta)) out << t.beta;
    out << "\n";
  }
}

Json read_json_file(const std::string& path) {
  auto in = open_file(path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("invalid JSON in '" + path + "': " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << content;
}

}  // namespace corrdesign
