// sven: Elastic Net / Lasso solving via a squared-hinge-loss SVM reduction,
// with a coordinate-descent cross-check, path tooling and a bench harness.
#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Core>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>

#include "sven/bench.hpp"
#include "sven/check.hpp"
#include "sven/dataset.hpp"
#include "sven/errors.hpp"
#include "sven/path.hpp"
#include "sven/reduction.hpp"
#include "sven/synthetic.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct InputArgs {
  std::string path;
  std::string format = "csv";
  bool has_header = false;
  Eigen::Index dim_hint = 0;
};

void add_input_options(CLI::App* cmd, InputArgs& args) {
  cmd->add_option("--input", args.path, "input data file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--format", args.format, "input format")
      ->check(CLI::IsMember({"csv", "libsvm"}));
  cmd->add_flag("--has-header", args.has_header, "first CSV line is a header");
  cmd->add_option("--dim-hint", args.dim_hint,
                  "minimum feature count for libsvm input");
}

sven::RegressionProblem load_input(const InputArgs& args) {
  if (args.format == "libsvm") {
    return sven::load_libsvm(
        args.path, args.dim_hint > 0 ? std::optional(args.dim_hint) : std::nullopt);
  }
  return sven::load_dense_csv(args.path, args.has_header);
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

void write_json(const json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw sven::ParseError("cannot write " + path);
  out << doc.dump(2) << '\n';
}

std::optional<sven::Route> parse_route(const std::string& solver) {
  if (solver == "primal") return sven::Route::primal;
  if (solver == "dual") return sven::Route::dual;
  return std::nullopt;  // auto
}

int run_solve(const InputArgs& input, double t, double lambda2,
              const std::string& solver, double tol, bool check_budget,
              const std::string& output) {
  const sven::RegressionProblem raw = load_input(input);
  sven::validate(raw, 2);
  const auto [problem, record] = sven::standardize(raw);

  if (check_budget) {
    const double top = sven::lambda_max(problem.X, problem.y);
    if (top <= 0.0) {
      std::cerr << "warning: response is orthogonal to every feature; the "
                   "budget cannot bind\n";
    } else {
      sven::PenalizedSpec spec;
      spec.lambda1 = 1e-8 * top;
      spec.lambda2 = lambda2;
      try {
        const double cap = sven::cd_solve(problem.X, problem.y, spec).lpNorm<1>();
        if (t >= cap) {
          std::cerr << "warning: t = " << t
                    << " is not below the unconstrained optimum's L1 norm ("
                    << cap << "); the constraint is slack and the reported "
                    << "solution lies on the |beta|_1 = t boundary\n";
        }
      } catch (const sven::ConvergenceError&) {
        std::cerr << "warning: budget check inconclusive (oracle did not "
                     "converge)\n";
      }
    }
  }

  sven::SolverConfig cfg;
  cfg.tol = tol;
  sven::ReductionOptions opts;
  opts.force_route = parse_route(solver);

  const sven::ElasticNetSolution sol =
      sven::sven_solve(problem.X, problem.y, t, lambda2, cfg, opts);

  const Eigen::VectorXd beta_orig =
      sven::coefficients_to_original(sol.beta, record);

  json doc;
  doc["beta"] = vector_to_json(beta_orig);
  doc["beta_standardized"] = vector_to_json(sol.beta);
  doc["intercept"] = sven::intercept_for_original(beta_orig, record);
  doc["t"] = sol.t;
  doc["lambda2"] = sol.lambda2;
  doc["route"] = sven::route_name(sol.route);
  doc["iterations"] = sol.stats.iterations;
  doc["wall_time_ms"] = sol.stats.wall_time_ms;
  doc["l1_norm"] = sol.beta.lpNorm<1>();
  doc["lasso_mode"] = lambda2 == 0.0;
  doc["support_size"] = sol.support_size();
  doc["alpha_sum"] = sol.alpha_sum;
  doc["residual"] = sol.stats.residual;
  json dropped = json::array();
  for (Eigen::Index j = 0; j < record.col_scales.size(); ++j) {
    if (record.col_scales[j] == 0.0) dropped.push_back(j);
  }
  doc["dropped_columns"] = dropped;
  if (!raw.feature_names.empty()) doc["feature_names"] = raw.feature_names;
  write_json(doc, output);

  std::cout << "route=" << sven::route_name(sol.route)
            << " iterations=" << sol.stats.iterations
            << " support=" << sol.support_size()
            << " |beta|_1=" << sol.beta.lpNorm<1>() << " (t=" << t << ")\n";
  return 0;
}

int run_path(const InputArgs& input, double lambda2, int points, int grid,
             double tol, const std::string& out_dir) {
  const sven::RegressionProblem raw = load_input(input);
  sven::validate(raw, 2);
  const auto [problem, record] = sven::standardize(raw);
  fs::create_directories(out_dir);

  const sven::PathResult cd = sven::cd_path(problem.X, problem.y, lambda2, grid);
  const auto selected = sven::select_path_points(cd, points);

  sven::SolverConfig cfg;
  cfg.tol = tol;
  const sven::PathResult sv = sven::sven_path(problem.X, problem.y, selected, cfg);

  {
    std::ofstream out(fs::path(out_dir) / "cd_path.csv");
    sven::write_path_csv(cd, out);
  }
  {
    std::ofstream out(fs::path(out_dir) / "pairs.csv");
    out << "lambda2,t\n";
    char buf[96];
    for (const auto& pt : selected) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", pt.lambda2, pt.t);
      out << buf;
    }
  }
  {
    std::ofstream out(fs::path(out_dir) / "sven_path.csv");
    sven::write_path_csv(sv, out);
  }
  {
    // Tidy per-solver rows for plotting beta_i against the budget t.
    std::ofstream out(fs::path(out_dir) / "path_plotdata.csv");
    out << "solver,t";
    for (Eigen::Index j = 0; j < problem.n_features(); ++j) {
      out << ",beta_" << j + 1;
    }
    out << '\n';
    char buf[40];
    const auto dump = [&](const sven::PathResult& path, const char* name) {
      for (const auto& rec : path.records) {
        if (!rec.ok) continue;
        out << name;
        std::snprintf(buf, sizeof(buf), ",%.17g", rec.t);
        out << buf;
        for (Eigen::Index j = 0; j < rec.beta.size(); ++j) {
          std::snprintf(buf, sizeof(buf), ",%.17g", rec.beta[j]);
          out << buf;
        }
        out << '\n';
      }
    };
    dump(cd, "cd");
    dump(sv, "sven");
  }

  if (selected.empty()) {
    std::cerr << "warning: no nonzero-support settings on this path; pairs.csv "
                 "is empty\n";
    return 0;
  }

  bool any_failed = false;
  std::cout << "pair  lambda1       t             cd_nnz sven_nnz max|dbeta|\n";
  for (std::size_t i = 0; i < selected.size(); ++i) {
    const auto& oracle = cd.records[selected[i].path_index];
    const auto& ours = sv.records[i];
    if (!ours.ok) {
      any_failed = true;
      std::cout << i << "  FAILED: " << ours.error << '\n';
      continue;
    }
    const double diff = (ours.beta - oracle.beta).lpNorm<Eigen::Infinity>();
    char line[160];
    std::snprintf(line, sizeof(line), "%-5zu %-13.6g %-13.6g %-6td %-8td %.3g\n",
                  i, selected[i].lambda1, selected[i].t, oracle.support_size,
                  ours.support_size, diff);
    std::cout << line;
  }
  return any_failed ? 2 : 0;
}

sven::BenchOptions parse_bench_args(const std::string& regime,
                                    const std::vector<std::string>& size_args,
                                    const std::vector<std::uint64_t>& seeds,
                                    int repeats, double lambda2, int points,
                                    bool no_time, const std::string& route) {
  sven::BenchOptions options;
  options.regime = regime;
  options.repeats = repeats;
  options.lambda2 = lambda2;
  options.path_points = points;
  options.timing = !no_time;
  options.force_route = parse_route(route);
  options.seeds = seeds.empty() ? std::vector<std::uint64_t>{1, 2, 3} : seeds;

  const std::regex size_re(R"(n=(\d+),p=(\d+))");
  for (const std::string& s : size_args) {
    std::smatch m;
    if (!std::regex_match(s, m, size_re)) {
      throw sven::ParseError("bad --sizes entry '" + s +
                             "', expected n=<int>,p=<int>");
    }
    options.sizes.push_back({std::stol(m[1].str()), std::stol(m[2].str())});
  }
  if (options.sizes.empty()) {
    if (regime == "pggn") {
      options.sizes = {{40, 400}, {60, 800}};
    } else {
      options.sizes = {{1500, 15}, {3000, 30}};
    }
  }
  return options;
}

json bench_report_to_json(const sven::BenchReport& report) {
  json doc;
  doc["regime"] = report.regime;
  doc["lambda2"] = report.lambda2;
  doc["repeats"] = report.repeats;
  doc["threads"] = report.threads;
  doc["build_info"] = report.build_info;
  json cases = json::array();
  for (const auto& c : report.cases) {
    json jc;
    jc["seed"] = c.seed;
    jc["n"] = c.n;
    jc["p"] = c.p;
    jc["digest"] = c.digest;
    jc["auto_route"] = c.auto_route;
    jc["kernel_dim"] = c.kernel_dim;
    json points = json::array();
    for (const auto& pt : c.points) {
      json jp;
      jp["lambda1"] = pt.lambda1;
      jp["t"] = pt.t;
      jp["cd_support"] = pt.cd_support;
      json solvers = json::array();
      for (const auto& s : pt.solvers) {
        json js;
        js["name"] = s.name;
        js["converged"] = s.converged;
        js["iterations"] = s.iterations;
        js["support"] = s.support;
        js["max_diff_vs_cd"] = s.max_diff_vs_cd;
        js["median_wall_ms"] = s.wall_ms_median;
        solvers.push_back(std::move(js));
      }
      jp["solvers"] = std::move(solvers);
      points.push_back(std::move(jp));
    }
    jc["points"] = std::move(points);
    cases.push_back(std::move(jc));
  }
  doc["cases"] = std::move(cases);
  return doc;
}

int run_bench(const sven::BenchOptions& options, const std::string& output) {
  const sven::BenchReport report = sven::run_bench(options);
  write_json(bench_report_to_json(report), output);

  for (const auto& c : report.cases) {
    std::cout << "seed=" << c.seed << " n=" << c.n << " p=" << c.p
              << " auto_route=" << c.auto_route << " digest=" << c.digest << '\n';
    for (const auto& pt : c.points) {
      std::cout << "  t=" << pt.t << " (nnz " << pt.cd_support << ")";
      for (const auto& s : pt.solvers) {
        std::cout << "  " << s.name << "=" << s.wall_ms_median << "ms";
        if (!s.converged) std::cout << "(FAILED)";
      }
      std::cout << '\n';
    }
  }
  std::cout << "report written to " << output << '\n';
  return 0;
}

int run_check(int cases, std::uint64_t seed, double tol,
              const std::string& mutation, const std::string& output) {
  if (cases < 1) {
    std::cerr << "error: --cases must be at least 1\n";
    return 1;
  }
  sven::CheckOptions options;
  options.cases = cases;
  options.seed = seed;
  options.tol = tol;
  options.mutation = mutation == "drop-alpha-norm"
                         ? sven::CheckMutation::drop_alpha_norm
                         : sven::CheckMutation::none;

  const sven::CheckReport report = sven::run_equivalence_check(options);

  if (!output.empty()) {
    json doc;
    doc["cases"] = cases;
    doc["seed"] = seed;
    doc["tol"] = tol;
    doc["passed"] = report.passed;
    doc["all_pass"] = report.all_pass;
    doc["max_diff"] = report.max_diff;
    doc["max_l1_gap"] = report.max_l1_gap;
    json rows = json::array();
    for (const auto& c : report.cases) {
      json row;
      row["seed"] = c.seed;
      row["n"] = c.n;
      row["p"] = c.p;
      row["lambda2"] = c.lambda2;
      row["route"] = sven::route_name(c.route);
      row["max_diff"] = c.max_diff;
      row["max_l1_gap"] = c.max_l1_gap;
      row["pass"] = c.pass;
      rows.push_back(std::move(row));
    }
    doc["results"] = std::move(rows);
    write_json(doc, output);
  }

  for (const auto& c : report.cases) {
    if (!c.pass) {
      std::cout << "FAIL seed=" << c.seed << " n=" << c.n << " p=" << c.p
                << " lambda2=" << c.lambda2 << " max_diff=" << c.max_diff << '\n';
    }
  }
  std::cout << report.passed << "/" << cases << " cases within " << tol
            << " (max diff " << report.max_diff << ", max L1 gap "
            << report.max_l1_gap << ")\n";
  return report.all_pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("SVEN_THREADS")) {
    Eigen::setNbThreads(std::max(1, std::atoi(threads)));
  }

  CLI::App app{"Elastic Net and Lasso via a squared-hinge-loss SVM reduction"};
  app.require_subcommand(1);

  InputArgs solve_input;
  double solve_t = 0.0, solve_lambda2 = 0.0, solve_tol = 1e-8;
  std::string solve_solver = "auto", solve_output;
  bool solve_check_budget = false;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve one Elastic Net instance");
  add_input_options(solve_cmd, solve_input);
  solve_cmd->add_option("--t", solve_t, "L1 budget")->required()
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--lambda2", solve_lambda2, "L2 penalty weight")
      ->required()->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--solver", solve_solver, "route selection")
      ->check(CLI::IsMember({"auto", "primal", "dual"}));
  solve_cmd->add_option("--tol", solve_tol, "solver tolerance")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_flag("--check-budget", solve_check_budget,
                      "warn when the L1 constraint cannot bind");
  solve_cmd->add_option("--output", solve_output, "JSON output path")->required();

  InputArgs path_input;
  double path_lambda2 = 0.0, path_tol = 1e-8;
  int path_points = 40, path_grid = 100;
  std::string path_out_dir;
  CLI::App* path_cmd =
      app.add_subcommand("path", "regularization path: CD grid + reduction");
  add_input_options(path_cmd, path_input);
  path_cmd->add_option("--lambda2", path_lambda2, "L2 penalty weight")
      ->required()->check(CLI::NonNegativeNumber);
  path_cmd->add_option("--points", path_points, "settings to select")
      ->check(CLI::PositiveNumber);
  path_cmd->add_option("--grid", path_grid, "lambda1 grid size")
      ->check(CLI::Range(2, 100000));
  path_cmd->add_option("--tol", path_tol, "solver tolerance")
      ->check(CLI::PositiveNumber);
  path_cmd->add_option("--out-dir", path_out_dir, "artifact directory")->required();

  std::string bench_regime, bench_route = "both", bench_output = "bench_report.json";
  std::vector<std::string> bench_sizes;
  std::vector<std::uint64_t> bench_seeds;
  int bench_repeats = 3, bench_points = 3;
  double bench_lambda2 = 1.0;
  bool bench_no_time = false;
  CLI::App* bench_cmd = app.add_subcommand("bench", "synthetic benchmark harness");
  bench_cmd->add_option("--regime", bench_regime, "problem shape regime")
      ->required()->check(CLI::IsMember({"pggn", "nggp"}));
  bench_cmd->add_option("--sizes", bench_sizes, "case sizes, e.g. n=50,p=2000");
  bench_cmd->add_option("--seeds", bench_seeds, "generator seeds")->delimiter(',');
  bench_cmd->add_option("--repeats", bench_repeats, "timing repeats")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--lambda2", bench_lambda2, "L2 penalty weight")
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--points", bench_points, "path points per case")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--no-time", bench_no_time, "suppress wall-time fields");
  bench_cmd->add_option("--route", bench_route, "which reduction routes to run")
      ->check(CLI::IsMember({"both", "primal", "dual"}));
  bench_cmd->add_option("--output", bench_output, "report JSON path");

  int check_cases = 200;
  std::uint64_t check_seed = 12345;
  double check_tol = 1e-4;
  std::string check_mutation = "none", check_output;
  CLI::App* check_cmd =
      app.add_subcommand("check", "randomized oracle-equivalence suite");
  check_cmd->add_option("--cases", check_cases, "number of random cases");
  check_cmd->add_option("--seed", check_seed, "base seed");
  check_cmd->add_option("--tol", check_tol, "pass tolerance")
      ->check(CLI::PositiveNumber);
  check_cmd->add_option("--output", check_output, "JSON results path");
  check_cmd->add_option("--mutation", check_mutation,
                        "harness self-test: deliberately break the recovery")
      ->check(CLI::IsMember({"none", "drop-alpha-norm"}))
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (solve_cmd->parsed()) {
      return run_solve(solve_input, solve_t, solve_lambda2, solve_solver,
                       solve_tol, solve_check_budget, solve_output);
    }
    if (path_cmd->parsed()) {
      return run_path(path_input, path_lambda2, path_points, path_grid, path_tol,
                      path_out_dir);
    }
    if (bench_cmd->parsed()) {
      return run_bench(
          parse_bench_args(bench_regime, bench_sizes, bench_seeds, bench_repeats,
                           bench_lambda2, bench_points, bench_no_time, bench_route),
          bench_output);
    }
    if (check_cmd->parsed()) {
      return run_check(check_cases, check_seed, check_tol, check_mutation,
                       check_output);
    }
  } catch (const sven::ConvergenceError& e) {
    std::cerr << "solver failure: " << e.what() << " (residual " << e.residual
              << ")\n";
    return 2;
  } catch (const sven::DegenerateSolutionError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 2;
  } catch (const sven::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const sven::DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const sven::DegenerateInputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
