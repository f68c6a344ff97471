#include "sven/bench.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include "sven/dataset.hpp"
#include "sven/errors.hpp"
#include "sven/path.hpp"
#include "sven/synthetic.hpp"

namespace sven {
namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

double time_call_ms(const std::function<void()>& fn) {
  const auto start = Clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Walks the lambda1 grid until the CD support reaches `target`; returns the
// record at that point (or the deepest one reached).
PathRecord first_record_with_support(const Eigen::MatrixXd& X,
                                     const Eigen::VectorXd& y, double lambda2,
                                     Eigen::Index target) {
  const double top = lambda_max(X, y);
  const int grid = 30;
  Eigen::VectorXd warm = Eigen::VectorXd::Zero(X.cols());
  PathRecord rec;
  for (int k = 1; k < grid; ++k) {
    const double lambda1 =
        top * std::pow(10.0, -3.0 * static_cast<double>(k) / (grid - 1));
    PenalizedSpec spec;
    spec.lambda1 = lambda1;
    spec.lambda2 = lambda2;
    warm = cd_solve(X, y, spec, warm);
    rec.lambda1 = lambda1;
    rec.lambda2 = lambda2;
    rec.beta = warm;
    rec.t = warm.lpNorm<1>();
    rec.support_size = (warm.array() != 0.0).count();
    rec.solver = "cd";
    if (rec.support_size >= target) break;
  }
  return rec;
}

}  // namespace

BenchReport run_bench(const BenchOptions& options) {
  if (options.repeats < 1) throw DimensionError("repeats must be at least 1");
  if (options.sizes.empty()) throw DimensionError("no sizes given");
  if (options.seeds.empty()) throw DimensionError("no seeds given");

  BenchReport report;
  report.regime = options.regime;
  report.lambda2 = options.lambda2;
  report.repeats = options.repeats;
  report.threads = Eigen::nbThreads();
  report.build_info = __VERSION__;

  for (const BenchSize& size : options.sizes) {
    for (const std::uint64_t seed : options.seeds) {
      BenchCaseResult case_result;
      case_result.seed = seed;
      case_result.n = size.n;
      case_result.p = size.p;

      const RegressionProblem raw = make_regression(seed, size.n, size.p);
      case_result.digest = problem_digest(raw);
      const auto [problem, record] = standardize(raw);
      const Eigen::MatrixXd& X = problem.X;
      const Eigen::VectorXd& y = problem.y;
      case_result.auto_route =
          route_name(2 * X.cols() > X.rows() ? Route::primal : Route::dual);
      case_result.kernel_dim = 2 * X.cols();

      std::vector<PathRecord> point_records;
      if (options.point_at_generator_support) {
        const Eigen::Index target = std::max<Eigen::Index>(3, size.p / 20);
        point_records.push_back(
            first_record_with_support(X, y, options.lambda2, target));
      } else {
        const PathResult cd = cd_path(X, y, options.lambda2, 10);
        for (const SelectedPoint& pt :
             select_path_points(cd, options.path_points)) {
          point_records.push_back(cd.records[pt.path_index]);
        }
      }

      for (const PathRecord& point : point_records) {
        BenchPointResult point_result;
        point_result.lambda1 = point.lambda1;
        point_result.t = point.t;
        point_result.cd_support = point.support_size;
        if (!(point.t > 0.0)) continue;

        // CD timing: cold solves at the harvested penalty.
        {
          BenchSolverResult r;
          r.name = "cd";
          PenalizedSpec spec;
          spec.lambda1 = point.lambda1;
          spec.lambda2 = options.lambda2;
          Eigen::VectorXd beta;
          std::vector<double> times;
          for (int rep = 0; rep < options.repeats; ++rep) {
            times.push_back(time_call_ms([&] { beta = cd_solve(X, y, spec); }));
          }
          r.wall_ms_median = options.timing ? median(times) : 0.0;
          r.converged = true;
          r.support = (beta.array() != 0.0).count();
          r.max_diff_vs_cd = (beta - point.beta).lpNorm<Eigen::Infinity>();
          point_result.solvers.push_back(std::move(r));
        }

        std::vector<Route> routes;
        if (options.force_route) {
          routes.push_back(*options.force_route);
        } else {
          routes = {Route::primal, Route::dual};
        }
        for (const Route route : routes) {
          BenchSolverResult r;
          r.name = std::string("sven-") + route_name(route);
          ReductionOptions opts;
          opts.force_route = route;
          try {
            // One untimed warm-up run, then timed repeats.
            ElasticNetSolution sol =
                sven_solve(X, y, point.t, options.lambda2, options.solver, opts);
            std::vector<double> times;
            for (int rep = 0; rep < options.repeats; ++rep) {
              times.push_back(time_call_ms([&] {
                sol = sven_solve(X, y, point.t, options.lambda2, options.solver,
                                 opts);
              }));
            }
            r.wall_ms_median = options.timing ? median(times) : 0.0;
            r.iterations = sol.stats.iterations;
            r.converged = true;
            r.support = sol.support_size();
            r.max_diff_vs_cd = (sol.beta - point.beta).lpNorm<Eigen::Infinity>();
          } catch (const Error&) {
            r.converged = false;
          }
          point_result.solvers.push_back(std::move(r));
        }
        case_result.points.push_back(std::move(point_result));
      }
      report.cases.push_back(std::move(case_result));
    }
  }
  return report;
}

}  // namespace sven
