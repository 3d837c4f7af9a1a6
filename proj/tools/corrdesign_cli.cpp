#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "corrdesign/experiments.hpp"
#include "corrdesign/io.hpp"

namespace fs = std::filesystem;
using namespace corrdesign;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;
constexpr int kNotConverged = 4;

struct Common {
  std::string config_path;
  std::string config_inline;
  std::string out_dir;
};

Json load_config(const Common& c) {
  Json j = Json::object();
  if (!c.config_path.empty()) j = read_json_file(c.config_path);
  if (!c.config_inline.empty()) {
    try {
      j.merge_patch(Json::parse(c.config_inline));
    } catch (const Json::parse_error& e) {
      throw ConfigError(std::string("invalid inline JSON: ") + e.what());
    }
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (j.contains("schema") && j.at("schema") != kSchema)
    throw ConfigError("unsupported schema '" + j.at("schema").dump() + "', expected " + kSchema);
  return j;
}

const Json& block(const Json& config, const char* key) {
  if (!config.contains(key)) throw ConfigError(std::string("config is missing the '") + key + "' block");
  return config.at(key);
}

struct Model {
  RegressionBasis basis;
  CovarianceKernel kernel;
  Criterion criterion;
  MomentOptions moments;
};

Model load_model(const Json& config) {
  auto basis = basis_from_json(block(config, "basis"));
  auto kernel = kernel_from_json(block(config, "kernel"));
  auto criterion = criterion_from_json(config.value("criterion", Json::object()), static_cast<int>(basis.size()));
  auto moments = moment_options_from_json(config.value("moments", Json::object()));
  return {basis, kernel, criterion, moments};
}

Json model_json(const Model& m) {
  return {{"basis", to_json(m.basis)},
          {"kernel", to_json(m.kernel)},
          {"criterion", to_json(m.criterion)},
          {"moments", {{"policy", to_string(m.moments.policy)}, {"condition_limit", m.moments.condition_limit}}}};
}

std::string out_path(const Common& c, const std::string& file) {
  fs::create_directories(c.out_dir);
  return (fs::path(c.out_dir) / file).string();
}

// JSON to <out>/<file> when an output directory is given, stdout otherwise.
void emit_json(const Common& c, const std::string& file, const Json& j) {
  if (c.out_dir.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    write_text_file(out_path(c, file), j.dump(2) + "\n");
  }
}

template <typename Writer>
void emit_csv(const Common& c, const std::string& file, Writer&& writer) {
  if (c.out_dir.empty()) return;
  std::ostringstream s;
  writer(s);
  write_text_file(out_path(c, file), s.str());
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "JSON config file");
  app->add_option("--set", c.config_inline, "JSON object merged into the config");
  app->add_option("--out", c.out_dir, "Output directory");
}

Design resolve_design(const std::string& flag, const Json& config, const char* key) {
  if (!flag.empty()) return design_from_name(flag);
  return design_from_json(block(config, key));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal designs for regression with correlated errors"};
  app.require_subcommand(1, 1);

  // solve
  Common solve_c;
  std::optional<int> grid_n, max_iter;
  std::optional<double> tol;
  std::string beta, initial;
  auto* solve_cmd = app.add_subcommand("solve", "Multiplicative algorithm on a grid");
  add_common(solve_cmd, solve_c);
  solve_cmd->add_option("--grid-n", grid_n, "Grid size");
  solve_cmd->add_option("--beta", beta, "Fixed beta or 'adaptive'");
  solve_cmd->add_option("--max-iter", max_iter, "Iteration limit");
  solve_cmd->add_option("--tol", tol, "Convergence tolerance on max |psi - 1|");
  solve_cmd->add_option("--initial", initial, "Initial design (name or CSV file)");

  // check
  Common check_c;
  std::string check_design;
  int check_grid = 401;
  double check_tol = 1e-3;
  auto* check_cmd = app.add_subcommand("check", "Optimality checks for a given design");
  add_common(check_cmd, check_c);
  check_cmd->add_option("--design", check_design, "Design (name or CSV file)");
  check_cmd->add_option("--grid-n", check_grid, "Evaluation grid size");
  check_cmd->add_option("--tol", check_tol, "Relative tolerance");

  // efficiency
  Common eff_c;
  std::string eff_design, eff_reference;
  auto* eff_cmd = app.add_subcommand("efficiency", "D-efficiency against a reference (solver optimum by default)");
  add_common(eff_cmd, eff_c);
  eff_cmd->add_option("--design", eff_design, "Design (name or CSV file)");
  eff_cmd->add_option("--reference", eff_reference, "Reference design (name or CSV file)");

  // spectral
  Common spec_c;
  std::string pair_name;
  int pair_index = 0, spec_points = 21, identity_n = -1;
  double pair_parameter = 0.0;
  auto* spec_cmd = app.add_subcommand("spectral", "Mercer eigenpair residuals");
  add_common(spec_cmd, spec_c);
  spec_cmd->add_option("--pair", pair_name,
                       "chebyshev-log | cosine-periodic | gegenbauer-power | brownian-sine | exponential");
  spec_cmd->add_option("--index", pair_index, "Eigenfunction index");
  spec_cmd->add_option("--parameter", pair_parameter, "alpha or lambda");
  spec_cmd->add_option("--points", spec_points, "Test points");
  spec_cmd->add_option("--chebyshev-identity", identity_n, "Residual of the Chebyshev/log identity for T_n");

  // mc-oracle
  Common mc_c;
  std::optional<int> n_rep, mc_points, threads;
  std::optional<std::uint64_t> seed;
  auto* mc_cmd = app.add_subcommand("mc-oracle", "Monte Carlo check of the LSE covariance");
  add_common(mc_cmd, mc_c);
  mc_cmd->add_option("--n-rep", n_rep, "Replications");
  mc_cmd->add_option("--seed", seed, "Seed");
  mc_cmd->add_option("--points", mc_points, "Equispaced design points");
  mc_cmd->add_option("--threads", threads, "Worker threads");

  // tables
  Common tab_c;
  std::vector<int> table_ids{1, 2, 3};
  TableOptions table_opts;
  auto* tab_cmd = app.add_subcommand("tables", "Recompute the efficiency tables");
  add_common(tab_cmd, tab_c);
  tab_cmd->add_option("--id", table_ids, "Table ids")->check(CLI::IsMember({1, 2, 3}));
  tab_cmd->add_option("--grid-n", table_opts.grid_n, "Solver grid size");
  tab_cmd->add_option("--max-iter", table_opts.max_iter, "Solver iteration limit");
  tab_cmd->add_option("--continuous-n", table_opts.continuous_n, "Atoms of continuous designs");

  // figure
  Common fig_c;
  std::vector<int> figure_ids{1, 3, 4, 5};
  FigureOptions fig_opts;
  auto* fig_cmd = app.add_subcommand("figure", "Plot-ready figure data");
  add_common(fig_cmd, fig_c);
  fig_cmd->add_option("--id", figure_ids, "Figure ids")->check(CLI::IsMember({1, 3, 4, 5}));
  fig_cmd->add_option("--grid-n", fig_opts.grid_n, "Evaluation grid size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*solve_cmd) {
      const Json config = load_config(solve_c);
      const Model model = load_model(config);
      SolverConfig sc = solver_config_from_json(config.value("solver", Json::object()));
      if (!config.value("solver", Json::object()).contains("policy")) sc.moments = model.moments;
      if (grid_n) sc.grid_n = *grid_n;
      if (max_iter) sc.max_iter = *max_iter;
      if (tol) sc.conv_tol = *tol;
      if (!beta.empty()) {
        if (beta == "adaptive") {
          sc.beta_rule = AdaptiveMin{};
        } else {
          try {
            sc.beta_rule = FixedBeta{std::stod(beta)};
          } catch (const std::exception&) {
            throw ConfigError("--beta must be a number or 'adaptive'");
          }
        }
      }
      std::optional<Design> init;
      if (!initial.empty()) init = design_from_name(initial);
      else if (config.contains("initial")) init = design_from_json(config.at("initial"));
      const SolveResult r = solve(model.basis, model.kernel, model.criterion, sc, init);

      Json resolved = model_json(model);
      resolved["schema"] = kSchema;
      resolved["solver"] = to_json(sc);
      Json report = {{"schema", kSchema},
                     {"config", resolved},
                     {"status", r.converged ? "CONVERGED" : "NOT-CONVERGED"},
                     {"iterations", r.iterations},
                     {"final_deviation", r.final_deviation},
                     {"criterion_value", r.criterion},
                     {"monotonicity_warnings", r.monotonicity_warnings},
                     {"rejected_steps", r.rejected_steps},
                     {"smoothing_halfwidth", r.moments.smoothing_halfwidth.value_or(0.0)},
                     {"design", to_json(r.design)},
                     {"check", to_json(r.report, !solve_c.out_dir.empty())}};
      emit_json(solve_c, "report.json", report);
      emit_csv(solve_c, "design.csv", [&](std::ostream& s) { write_design_csv(s, r.design); });
      emit_csv(solve_c, "trace.csv", [&](std::ostream& s) { write_trace_csv(s, r.trace); });
      if (!r.converged) {
        std::cerr << "NOT-CONVERGED after " << r.iterations << " iterations (max |psi - 1| = " << r.final_deviation
                  << ")\n";
        return kNotConverged;
      }
      return kOk;
    }

    if (*check_cmd) {
      const Json config = load_config(check_c);
      const Model model = load_model(config);
      const Design design = resolve_design(check_design, config, "design");
      const Vector grid = equispaced(check_grid, model.basis.domain());
      const OptimalityReport report =
          model.criterion.kind == Criterion::Kind::C
              ? c_optimality_check(design, model.basis, model.kernel, model.criterion.c, grid, check_tol, model.moments)
              : necessary_condition_check(design, model.basis, model.kernel, model.criterion, grid, check_tol,
                                          model.moments);
      const UniversalReport universal =
          universal_optimality_check(design, model.basis, model.kernel, grid, check_tol, model.moments);
      Json resolved = model_json(model);
      resolved["schema"] = kSchema;
      resolved["design"] = to_json(design);
      resolved["grid_n"] = check_grid;
      resolved["tol"] = check_tol;
      Json out = {{"schema", kSchema},
                  {"config", resolved},
                  {"necessary", to_json(report, !check_c.out_dir.empty())},
                  {"universal", to_json(universal)}};
      emit_json(check_c, "report.json", out);
      emit_csv(check_c, "report.csv", [&](std::ostream& s) { write_report_csv(s, report); });
      return kOk;
    }

    if (*eff_cmd) {
      const Json config = load_config(eff_c);
      const Model model = load_model(config);
      if (model.criterion.kind != Criterion::Kind::D) throw ConfigError("efficiency is defined for the D-criterion");
      const Design design = resolve_design(eff_design, config, "design");
      Json out = {{"schema", kSchema}};
      Design reference = design;
      MomentOptions moments = model.moments;
      if (!eff_reference.empty() || config.contains("reference")) {
        reference = resolve_design(eff_reference, config, "reference");
        out["reference_source"] = "given";
      } else {
        SolverConfig sc = solver_config_from_json(config.value("solver", Json::object()));
        sc.moments = model.moments;
        const SolveResult r = solve(model.basis, model.kernel, model.criterion, sc);
        reference = r.grid_design;
        moments = r.moments;
        out["reference_source"] = "solver";
        out["reference_converged"] = r.converged;
        out["solver"] = to_json(sc);
      }
      Json resolved = model_json(model);
      resolved["design"] = to_json(design);
      out["config"] = resolved;
      out["reference"] = to_json(reference.pruned(1e-10));
      out["efficiency"] = efficiency(design, reference, model.basis, model.kernel, moments);
      emit_json(eff_c, "efficiency.json", out);
      return kOk;
    }

    if (*spec_cmd) {
      Json out = {{"schema", kSchema}};
      if (identity_n >= 0) {
        const Vector pts = equispaced(spec_points);
        out["chebyshev_identity"] = {{"n", identity_n},
                                     {"eigenvalue", chebyshev_log_eigenvalue(identity_n)},
                                     {"max_residual", chebyshev_log_identity(identity_n, pts)}};
      } else {
        if (pair_name.empty()) throw ConfigError("spectral needs --pair or --chebyshev-identity");
        const EigenPairSpec spec = named_pair(pair_name, pair_index, pair_parameter);
        const Vector pts = equispaced(spec_points + 2, spec.measure.interval).segment(1, spec_points);
        const MercerResidual r = mercer_residual(spec, pts);
        out["pair"] = {{"name", spec.name}, {"index", pair_index}, {"parameter", pair_parameter},
                       {"eigenvalue", spec.eigenvalue}, {"kernel", to_json(spec.kernel)}};
        out["residual"] = to_json(r);
      }
      emit_json(spec_c, "spectral.json", out);
      return kOk;
    }

    if (*mc_cmd) {
      const Json config = load_config(mc_c);
      const RegressionBasis basis = basis_from_json(block(config, "basis"));
      const CovarianceKernel kernel = kernel_from_json(block(config, "kernel"));
      const Json o = config.value("oracle", Json::object());
      SimulationConfig sim;
      sim.n_rep = n_rep.value_or(o.value("n_rep", sim.n_rep));
      sim.seed = seed.value_or(o.value("seed", std::uint64_t{0}));
      sim.threads = threads.value_or(o.value("threads", 1));
      if (o.contains("points") && !mc_points) {
        auto p = o.at("points").get<std::vector<double>>();
        sim.points = Eigen::Map<Vector>(p.data(), static_cast<Index>(p.size()));
      } else {
        sim.points = equispaced(mc_points.value_or(o.value("n", 6)), basis.domain());
      }
      const SimulationResult r = simulate_lse_cov(sim, basis, kernel);
      Json out = {{"schema", kSchema},
                  {"config",
                   {{"basis", to_json(basis)},
                    {"kernel", to_json(kernel)},
                    {"oracle",
                     {{"n_rep", sim.n_rep}, {"seed", sim.seed}, {"threads", sim.threads},
                      {"block_size", sim.block_size}, {"points", to_json(sim.points)}}}}},
                  {"result", to_json(r)}};
      emit_json(mc_c, "mc_oracle.json", out);
      return kOk;
    }

    if (*tab_cmd) {
      Json summary = {{"schema", kSchema},
                      {"options",
                       {{"grid_n", table_opts.grid_n},
                        {"max_iter", table_opts.max_iter},
                        {"conv_tol", table_opts.conv_tol},
                        {"continuous_n", table_opts.continuous_n}}},
                      {"tables", Json::array()}};
      for (int id : table_ids) {
        const TableResult t = run_table(id, table_opts);
        emit_csv(tab_c, "table" + std::to_string(id) + ".csv", [&](std::ostream& s) { write_table_csv(s, t); });
        Json rows = Json::array();
        for (const auto& r : t.rows)
          rows.push_back({{"label", r.label}, {"parameter", r.parameter}, {"published", r.published},
                          {"computed", r.computed}, {"delta", r.delta}, {"converged", r.converged}});
        summary["tables"].push_back({{"id", id}, {"title", t.title}, {"tolerance", t.tolerance},
                                     {"within_tolerance", t.within_tolerance()},
                                     {"rows_total", t.rows.size()}, {"rows", rows}});
      }
      emit_json(tab_c, "tables.json", summary);
      return kOk;
    }

    if (*fig_cmd) {
      if (fig_c.out_dir.empty()) throw ConfigError("figure needs --out");
      Json files = Json::array();
      for (int id : figure_ids) {
        for (const auto& data : run_figure(id, fig_opts)) {
          emit_csv(fig_c, data.name + ".csv", [&](std::ostream& s) { write_figure_csv(s, data); });
          files.push_back(data.name + ".csv");
        }
      }
      std::cout << Json({{"schema", kSchema}, {"files", files}}).dump(2) << "\n";
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kOk;
}
