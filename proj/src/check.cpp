#include "sven/check.hpp"

#include <algorithm>
#include <cmath>

#include "sven/dataset.hpp"
#include "sven/errors.hpp"
#include "sven/path.hpp"
#include "sven/synthetic.hpp"

namespace sven {

CheckReport run_equivalence_check(const CheckOptions& options) {
  if (options.cases < 1) throw DimensionError("cases must be at least 1");
  constexpr double kFractions[] = {0.3, 0.6, 0.9};
  constexpr double kLambda2Grid[] = {0.1, 1.0, 10.0};

  CheckReport report;
  for (int c = 0; c < options.cases; ++c) {
    CheckCase result;
    result.seed = mix_seed(options.seed, static_cast<std::uint64_t>(c));
    Rng dims(result.seed);
    result.n = static_cast<Eigen::Index>(dims.uniform_int(5, 60));
    result.p = static_cast<Eigen::Index>(dims.uniform_int(2, 40));
    result.lambda2 = kLambda2Grid[c % 3];

    const RegressionProblem raw = make_regression(
        mix_seed(result.seed, 1), result.n, result.p,
        std::max<Eigen::Index>(1, result.p / 4), 0.2);
    const auto [problem, record] = standardize(raw);

    // Budgets come off the nearly-unpenalized CD solution.
    PenalizedSpec small;
    small.lambda1 = 1e-3 * lambda_max(problem.X, problem.y);
    small.lambda2 = result.lambda2;
    const Eigen::VectorXd beta_small = cd_solve(problem.X, problem.y, small);
    const double l1_small = beta_small.lpNorm<1>();

    bool ok = l1_small > 0.0;
    for (const double frac : kFractions) {
      if (!ok) break;
      const double t = frac * l1_small;
      const BudgetConversion conv =
          lambda1_for_budget(problem.X, problem.y, result.lambda2, t);
      const ElasticNetSolution sol =
          sven_solve(problem.X, problem.y, t, result.lambda2, options.solver);
      result.route = sol.route;

      Eigen::VectorXd beta = sol.beta;
      if (options.mutation == CheckMutation::drop_alpha_norm) {
        const Eigen::Index p = sol.alpha.size() / 2;
        beta = t * (sol.alpha.head(p) - sol.alpha.tail(p));
      }
      result.max_diff = std::max(
          result.max_diff, (beta - conv.beta).lpNorm<Eigen::Infinity>());
      result.max_l1_gap =
          std::max(result.max_l1_gap, std::abs(beta.lpNorm<1>() - t));
    }

    result.pass = ok && result.max_diff <= options.tol;
    report.max_diff = std::max(report.max_diff, result.max_diff);
    report.max_l1_gap = std::max(report.max_l1_gap, result.max_l1_gap);
    if (result.pass) ++report.passed;
    report.cases.push_back(result);
  }
  report.all_pass = report.passed == options.cases;
  return report;
}

}  // namespace sven
