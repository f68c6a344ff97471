#include "sven/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sven/errors.hpp"

namespace sven {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view token, std::size_t row, std::size_t col) {
  token = trim(token);
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;  // from_chars rejects a leading '+'
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || token.empty()) {
    throw ParseError("row " + std::to_string(row + 1) + ", column " +
                     std::to_string(col + 1) + ": not a number: '" +
                     std::string(token) + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError("row " + std::to_string(row + 1) + ", column " +
                     std::to_string(col + 1) + ": non-finite value");
  }
  return value;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  return in;
}

// %.17g round-trips IEEE doubles exactly.
void append_g17(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

void validate(const RegressionProblem& problem, Eigen::Index min_samples) {
  if (problem.X.rows() != problem.y.size()) {
    throw DimensionError("X has " + std::to_string(problem.X.rows()) +
                         " rows but y has " + std::to_string(problem.y.size()) +
                         " entries");
  }
  if (problem.n_samples() < min_samples) {
    throw DimensionError("need at least " + std::to_string(min_samples) +
                         " samples, got " + std::to_string(problem.n_samples()));
  }
  if (problem.n_features() < 1) throw DimensionError("need at least one feature");
  if (!problem.X.allFinite()) throw DegenerateInputError("X contains non-finite values");
  if (!problem.y.allFinite()) throw DegenerateInputError("y contains non-finite values");
  if (!problem.feature_names.empty() &&
      static_cast<Eigen::Index>(problem.feature_names.size()) != problem.n_features()) {
    throw DimensionError("feature_names length does not match feature count");
  }
}

std::vector<Eigen::Index> StandardizationRecord::kept_columns() const {
  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < col_scales.size(); ++j) {
    if (col_scales[j] != 0.0) kept.push_back(j);
  }
  return kept;
}

RegressionProblem load_dense_csv(const std::string& path, bool has_header) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;
  std::size_t cols = 0;
  std::size_t lineno = 0;
  bool header_pending = has_header;

  while (std::getline(in, line)) {
    std::string_view view = trim(line);
    if (view.empty()) {
      ++lineno;
      continue;
    }
    auto tokens = split(view, ',');
    if (header_pending) {
      header_pending = false;
      names.assign(tokens.begin() + 1, tokens.end());
      for (auto& n : names) n = std::string(trim(n));
      cols = tokens.size();
      ++lineno;
      continue;
    }
    if (cols == 0) cols = tokens.size();
    if (tokens.size() != cols) {
      throw ParseError("row " + std::to_string(lineno + 1) + ": expected " +
                       std::to_string(cols) + " columns, got " +
                       std::to_string(tokens.size()));
    }
    std::vector<double> row(tokens.size());
    for (std::size_t c = 0; c < tokens.size(); ++c) {
      row[c] = parse_number(tokens[c], rows.size(), c);
    }
    rows.push_back(std::move(row));
    ++lineno;
  }

  if (cols < 2) throw ParseError("CSV needs a response column and at least one feature");
  RegressionProblem problem;
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(cols - 1);
  problem.X.resize(n, p);
  problem.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    problem.y[i] = rows[i][0];
    for (Eigen::Index j = 0; j < p; ++j) problem.X(i, j) = rows[i][j + 1];
  }
  problem.feature_names = std::move(names);
  validate(problem, 2);
  return problem;
}

RegressionProblem load_libsvm(const std::string& path,
                              std::optional<Eigen::Index> dim_hint) {
  std::ifstream in = open_or_throw(path);
  std::string line;
  std::vector<double> labels;
  std::vector<std::vector<std::pair<Eigen::Index, double>>> sparse_rows;
  Eigen::Index max_index = dim_hint.value_or(0);
  std::size_t lineno = 0;

  while (std::getline(in, line)) {
    std::string_view view = trim(line);
    ++lineno;
    if (view.empty()) continue;
    std::istringstream tokens{std::string(view)};
    std::string tok;
    tokens >> tok;
    labels.push_back(parse_number(tok, lineno - 1, 0));

    std::vector<std::pair<Eigen::Index, double>> entries;
    Eigen::Index prev_index = 0;
    while (tokens >> tok) {
      std::size_t colon = tok.find(':');
      if (colon == std::string::npos) {
        throw ParseError("line " + std::to_string(lineno) +
                         ": expected <idx>:<val>, got '" + tok + "'");
      }
      long idx = 0;
      auto sv = std::string_view(tok).substr(0, colon);
      auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), idx);
      if (ec != std::errc() || ptr != sv.data() + sv.size()) {
        throw ParseError("line " + std::to_string(lineno) + ": bad index '" +
                         std::string(sv) + "'");
      }
      if (idx <= 0) {
        throw ParseError("line " + std::to_string(lineno) +
                         ": indices are 1-based, got " + std::to_string(idx));
      }
      if (idx <= prev_index) {
        throw ParseError("line " + std::to_string(lineno) +
                         ": indices must be strictly increasing");
      }
      double value = parse_number(std::string_view(tok).substr(colon + 1),
                                  lineno - 1, static_cast<std::size_t>(idx));
      entries.emplace_back(static_cast<Eigen::Index>(idx) - 1, value);
      prev_index = idx;
      max_index = std::max<Eigen::Index>(max_index, idx);
    }
    sparse_rows.push_back(std::move(entries));
  }

  if (sparse_rows.empty()) throw ParseError("empty libsvm file: " + path);
  if (max_index == 0) throw ParseError("no feature indices seen and no dim_hint given");

  RegressionProblem problem;
  const auto n = static_cast<Eigen::Index>(sparse_rows.size());
  problem.X = Eigen::MatrixXd::Zero(n, max_index);
  problem.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    problem.y[i] = labels[i];
    for (auto& [j, v] : sparse_rows[i]) problem.X(i, j) = v;
  }
  validate(problem, 1);
  return problem;
}

void write_libsvm(const RegressionProblem& problem, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  std::string line;
  for (Eigen::Index i = 0; i < problem.n_samples(); ++i) {
    line.clear();
    append_g17(line, problem.y[i]);
    for (Eigen::Index j = 0; j < problem.n_features(); ++j) {
      if (problem.X(i, j) == 0.0) continue;
      line += ' ';
      line += std::to_string(j + 1);
      line += ':';
      append_g17(line, problem.X(i, j));
    }
    line += '\n';
    out << line;
  }
}

std::pair<RegressionProblem, StandardizationRecord> standardize(
    const RegressionProblem& problem) {
  validate(problem, 2);
  const Eigen::Index n = problem.n_samples();
  const Eigen::Index p = problem.n_features();

  StandardizationRecord record;
  record.y_mean = problem.y.mean();
  record.col_means.resize(p);
  record.col_scales.setZero(p);

  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < p; ++j) {
    record.col_means[j] = problem.X.col(j).mean();
    const double scale =
        (problem.X.col(j).array() - record.col_means[j]).matrix().norm();
    // A centered norm this small means the column is constant to roundoff.
    const double floor = 1e-12 * std::max(1.0, problem.X.col(j).norm());
    if (scale > floor) {
      record.col_scales[j] = scale;
      kept.push_back(j);
    }
  }
  if (kept.empty()) {
    throw DegenerateInputError("every column of X is constant; nothing to fit");
  }

  RegressionProblem out;
  out.y = problem.y.array() - record.y_mean;
  out.X.resize(n, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const Eigen::Index j = kept[k];
    out.X.col(static_cast<Eigen::Index>(k)) =
        (problem.X.col(j).array() - record.col_means[j]) / record.col_scales[j];
  }
  if (!problem.feature_names.empty()) {
    for (Eigen::Index j : kept) out.feature_names.push_back(problem.feature_names[j]);
  }
  return {std::move(out), std::move(record)};
}

RegressionProblem unstandardize(const RegressionProblem& standardized,
                                const StandardizationRecord& record) {
  const Eigen::Index n = standardized.n_samples();
  const Eigen::Index p = record.col_scales.size();
  const auto kept = record.kept_columns();
  if (static_cast<Eigen::Index>(kept.size()) != standardized.n_features()) {
    throw DimensionError("record does not match the standardized problem");
  }
  RegressionProblem out;
  out.y = standardized.y.array() + record.y_mean;
  out.X.resize(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    out.X.col(j).setConstant(record.col_means[j]);
  }
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const Eigen::Index j = kept[k];
    out.X.col(j) = standardized.X.col(static_cast<Eigen::Index>(k)) *
                       record.col_scales[j] +
                   Eigen::VectorXd::Constant(n, record.col_means[j]);
  }
  return out;
}

Eigen::VectorXd coefficients_to_original(const Eigen::VectorXd& beta_standardized,
                                         const StandardizationRecord& record) {
  const auto kept = record.kept_columns();
  if (static_cast<Eigen::Index>(kept.size()) != beta_standardized.size()) {
    throw DimensionError("coefficient vector does not match the record");
  }
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(record.col_scales.size());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    beta[kept[k]] =
        beta_standardized[static_cast<Eigen::Index>(k)] / record.col_scales[kept[k]];
  }
  return beta;
}

double intercept_for_original(const Eigen::VectorXd& beta_original,
                              const StandardizationRecord& record) {
  if (beta_original.size() != record.col_means.size()) {
    throw DimensionError("coefficient vector does not match the record");
  }
  return record.y_mean - beta_original.dot(record.col_means);
}

}  // namespace sven
