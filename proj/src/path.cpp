#include "sven/path.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <set>
#include <sstream>

#include "sven/errors.hpp"

namespace sven {
namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - since)
      .count();
}

void append_g17(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

PathResult cd_path(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   double lambda2, int grid_size, double decades,
                   const PenalizedSpec& base) {
  if (grid_size < 2) throw DimensionError("grid_size must be at least 2");
  const double top = lambda_max(X, y);

  PathResult path;
  if (top <= 0.0) {
    // y is orthogonal to every column; the only solution is zero.
    PathRecord rec;
    rec.lambda1 = 0.0;
    rec.lambda2 = lambda2;
    rec.beta = Eigen::VectorXd::Zero(X.cols());
    rec.solver = "cd";
    path.records.push_back(std::move(rec));
    return path;
  }

  Eigen::VectorXd warm = Eigen::VectorXd::Zero(X.cols());
  for (int k = 0; k < grid_size; ++k) {
    const double frac = static_cast<double>(k) / (grid_size - 1);
    const double lambda1 = top * std::pow(10.0, -decades * frac);
    PenalizedSpec spec = base;
    spec.lambda1 = lambda1;
    spec.lambda2 = lambda2;

    PathRecord rec;
    rec.lambda1 = lambda1;
    rec.lambda2 = lambda2;
    rec.solver = "cd";
    const auto start = std::chrono::steady_clock::now();
    try {
      rec.beta = cd_solve(X, y, spec, warm);
    } catch (const ConvergenceError& e) {
      rec.ok = false;
      rec.error = "record " + std::to_string(k) + ": " + e.what();
      rec.beta = warm;
    }
    rec.wall_time_ms = elapsed_ms(start);
    rec.t = rec.beta.lpNorm<1>();
    rec.support_size = (rec.beta.array() != 0.0).count();
    warm = rec.beta;
    path.records.push_back(std::move(rec));
  }
  return path;
}

std::vector<SelectedPoint> select_path_points(const PathResult& path, int k) {
  if (k < 1) throw DimensionError("k must be at least 1");

  double t_ref = 0.0;
  for (const PathRecord& rec : path.records) t_ref = std::max(t_ref, rec.t);

  // One candidate per distinct support size. The zero-support head is
  // excluded, as are budgets at roundoff scale (a lone coefficient barely
  // past the threshold), which no solver can meaningfully hit.
  std::vector<std::size_t> candidates;
  std::set<Eigen::Index> seen;
  for (std::size_t i = 0; i < path.records.size(); ++i) {
    const PathRecord& rec = path.records[i];
    if (!rec.ok || rec.support_size == 0) continue;
    if (rec.t <= 1e-10 * t_ref) continue;
    if (seen.insert(rec.support_size).second) candidates.push_back(i);
  }

  std::vector<std::size_t> chosen;
  if (static_cast<int>(candidates.size()) <= k) {
    chosen = candidates;
  } else if (k == 1) {
    chosen.push_back(candidates.front());
  } else {
    for (int j = 0; j < k; ++j) {
      const std::size_t idx =
          (candidates.size() - 1) * static_cast<std::size_t>(j) / (k - 1);
      chosen.push_back(candidates[idx]);
    }
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  }

  std::vector<SelectedPoint> points;
  for (std::size_t idx : chosen) {
    const PathRecord& rec = path.records[idx];
    points.push_back({rec.lambda1, rec.lambda2, rec.t, idx});
  }
  return points;
}

PathResult sven_path(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const std::vector<SelectedPoint>& points,
                     const SolverConfig& cfg) {
  PathResult path;
  std::optional<Eigen::VectorXd> warm_alpha;
  for (const SelectedPoint& point : points) {
    PathRecord rec;
    rec.lambda1 = point.lambda1;
    rec.lambda2 = point.lambda2;
    rec.solver = "sven";
    const auto start = std::chrono::steady_clock::now();
    try {
      ReductionOptions opts;
      opts.warm_alpha = warm_alpha;
      const ElasticNetSolution sol =
          sven_solve(X, y, point.t, point.lambda2, cfg, opts);
      rec.beta = sol.beta;
      rec.t = point.t;
      rec.support_size = sol.support_size();
      warm_alpha = sol.route == Route::dual ? std::optional(sol.alpha)
                                            : std::nullopt;
    } catch (const Error& e) {
      rec.ok = false;
      rec.error = e.what();
      rec.beta = Eigen::VectorXd::Zero(X.cols());
      rec.t = point.t;
      warm_alpha.reset();
    }
    rec.wall_time_ms = elapsed_ms(start);
    path.records.push_back(std::move(rec));
  }
  return path;
}

BudgetConversion lambda1_for_budget(const Eigen::MatrixXd& X,
                                    const Eigen::VectorXd& y, double lambda2,
                                    double t, const PenalizedSpec& base,
                                    double rel_tol) {
  if (!(t > 0.0)) throw DimensionError("t must be positive");
  const double top = lambda_max(X, y);
  if (top <= 0.0) {
    throw DegenerateInputError("lambda_max is zero; no budget is reachable");
  }

  BudgetConversion out;
  const double target_tol = rel_tol * std::max(1.0, t);

  const auto solve_at = [&](double lambda1,
                            const std::optional<Eigen::VectorXd>& warm) {
    PenalizedSpec spec = base;
    spec.lambda1 = lambda1;
    spec.lambda2 = lambda2;
    ++out.cd_solves;
    return cd_solve(X, y, spec, warm);
  };

  double lo = 1e-8 * top;  // effectively unpenalized
  double hi = top;
  Eigen::VectorXd beta_lo = solve_at(lo, {});
  if (beta_lo.lpNorm<1>() < t - target_tol) {
    throw DegenerateInputError(
        "budget t exceeds the L1 norm of the nearly-unpenalized solution");
  }

  Eigen::VectorXd warm = beta_lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    warm = solve_at(mid, warm);
    const double l1 = warm.lpNorm<1>();
    if (std::abs(l1 - t) <= target_tol) {
      out.lambda1 = mid;
      out.beta = warm;
      return out;
    }
    if (l1 > t) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-16 * top) break;
  }

  // Interval exhausted: return the lower edge (L1 >= t side).
  out.lambda1 = lo;
  out.beta = solve_at(lo, warm);
  return out;
}

void write_path_csv(const PathResult& path, std::ostream& out) {
  const Eigen::Index p =
      path.records.empty() ? 0 : path.records.front().beta.size();
  std::string line = "lambda1,lambda2,t,nnz";
  for (Eigen::Index j = 0; j < p; ++j) {
    line += ",beta_" + std::to_string(j + 1);
  }
  line += '\n';
  out << line;
  for (const PathRecord& rec : path.records) {
    line.clear();
    append_g17(line, rec.lambda1);
    line += ',';
    append_g17(line, rec.lambda2);
    line += ',';
    append_g17(line, rec.t);
    line += ',';
    line += std::to_string(rec.support_size);
    for (Eigen::Index j = 0; j < rec.beta.size(); ++j) {
      line += ',';
      append_g17(line, rec.beta[j]);
    }
    line += '\n';
    out << line;
  }
}

PathResult read_path_csv(std::istream& in) {
  PathResult path;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty path CSV");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError("bad cell in path CSV: '" + cell + "'");
      }
    }
    if (values.size() < 4) throw ParseError("short row in path CSV");
    PathRecord rec;
    rec.lambda1 = values[0];
    rec.lambda2 = values[1];
    rec.t = values[2];
    rec.support_size = static_cast<Eigen::Index>(values[3]);
    rec.beta.resize(static_cast<Eigen::Index>(values.size()) - 4);
    for (std::size_t j = 4; j < values.size(); ++j) {
      rec.beta[static_cast<Eigen::Index>(j - 4)] = values[j];
    }
    path.records.push_back(std::move(rec));
  }
  return path;
}

}  // namespace sven
