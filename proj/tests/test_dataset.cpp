#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "sven/dataset.hpp"
#include "sven/errors.hpp"
#include "sven/synthetic.hpp"

using namespace sven;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("sven_dataset_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++) + ".txt");
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::filesystem::remove(path); }
};

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("csv: response first, remaining columns are features") {
  TempFile file("3,2\n1,0\n");
  const RegressionProblem problem = load_dense_csv(file.path.string(), false);
  CHECK(problem.n_samples() == 2);
  CHECK(problem.n_features() == 1);
  CHECK(problem.y[0] == 3.0);
  CHECK(problem.y[1] == 1.0);
  CHECK(problem.X(0, 0) == 2.0);
  CHECK(problem.X(1, 0) == 0.0);
  CHECK(problem.feature_names.empty());
}

TEST_CASE("csv: header line is skipped and names are kept") {
  TempFile file("y,f1\n3,2\n1,0\n");
  const RegressionProblem problem = load_dense_csv(file.path.string(), true);
  CHECK(problem.n_samples() == 2);
  CHECK(problem.y[0] == 3.0);
  REQUIRE(problem.feature_names.size() == 1);
  CHECK(problem.feature_names[0] == "f1");
}

TEST_CASE("csv: error paths") {
  SUBCASE("ragged row reports its index") {
    TempFile file("1,2\n1,2,3\n");
    CHECK_THROWS_AS(load_dense_csv(file.path.string(), false), ParseError);
  }
  SUBCASE("non-numeric cell") {
    TempFile file("1,2\n1,zap\n");
    CHECK_THROWS_AS(load_dense_csv(file.path.string(), false), ParseError);
  }
  SUBCASE("non-finite value") {
    TempFile file("1,2\n1,nan\n");
    CHECK_THROWS_AS(load_dense_csv(file.path.string(), false), ParseError);
  }
  SUBCASE("single row is a dimension error") {
    TempFile file("1,2\n");
    CHECK_THROWS_AS(load_dense_csv(file.path.string(), false), DimensionError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_dense_csv("/nonexistent/nowhere.csv", false), ParseError);
  }
}

TEST_CASE("libsvm: sparse placement and dim_hint") {
  SUBCASE("basic line") {
    TempFile file("1.5 1:0.5 3:2.0\n");
    const RegressionProblem problem = load_libsvm(file.path.string());
    CHECK(problem.y[0] == 1.5);
    CHECK(problem.X(0, 0) == 0.5);
    CHECK(problem.X(0, 1) == 0.0);
    CHECK(problem.X(0, 2) == 2.0);
  }
  SUBCASE("empty feature list with dim_hint") {
    TempFile file("-2 \n");
    const RegressionProblem problem = load_libsvm(file.path.string(), 2);
    CHECK(problem.y[0] == -2.0);
    CHECK(problem.n_features() == 2);
    CHECK(problem.X.row(0).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("two lines, direct placement") {
    TempFile file("1 2:1\n-1 1:1\n");
    const RegressionProblem problem = load_libsvm(file.path.string());
    CHECK(problem.y[0] == 1.0);
    CHECK(problem.y[1] == -1.0);
    CHECK(problem.X(0, 0) == 0.0);
    CHECK(problem.X(0, 1) == 1.0);
    CHECK(problem.X(1, 0) == 1.0);
    CHECK(problem.X(1, 1) == 0.0);
  }
  SUBCASE("non-increasing indices rejected") {
    TempFile file("1 2:1 2:3\n");
    CHECK_THROWS_AS(load_libsvm(file.path.string()), ParseError);
  }
  SUBCASE("zero index rejected") {
    TempFile file("1 0:1\n");
    CHECK_THROWS_AS(load_libsvm(file.path.string()), ParseError);
  }
}

TEST_CASE("libsvm: write then reload reproduces the matrix exactly") {
  const RegressionProblem problem = make_regression(99, 12, 7, 3, 0.3);
  TempFile file("");
  write_libsvm(problem, file.path.string());
  const RegressionProblem reloaded =
      load_libsvm(file.path.string(), problem.n_features());
  CHECK(max_abs_diff(problem.X, reloaded.X) == 0.0);
  CHECK((problem.y - reloaded.y).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("standardize: hand-checked 2x1 example") {
  RegressionProblem problem;
  problem.X.resize(2, 1);
  problem.X << 2, 0;
  problem.y.resize(2);
  problem.y << 3, 1;

  const auto [std_problem, record] = standardize(problem);
  CHECK(std_problem.X(0, 0) == doctest::Approx(0.70711).epsilon(1e-5));
  CHECK(std_problem.X(1, 0) == doctest::Approx(-0.70711).epsilon(1e-5));
  CHECK(std_problem.y[0] == doctest::Approx(1.0));
  CHECK(std_problem.y[1] == doctest::Approx(-1.0));
  CHECK(record.y_mean == doctest::Approx(2.0));
  CHECK(record.col_means[0] == doctest::Approx(1.0));
  CHECK(record.col_scales[0] == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("standardize: fixed point and moments") {
  const RegressionProblem raw = make_regression(7, 30, 6);
  const auto [once, rec1] = standardize(raw);

  SUBCASE("moments hold after one pass") {
    CHECK(std::abs(once.y.mean()) <= 1e-12);
    for (Eigen::Index j = 0; j < once.n_features(); ++j) {
      CHECK(std::abs(once.X.col(j).mean()) <= 1e-12);
      CHECK(std::abs(once.X.col(j).norm() - 1.0) <= 1e-12);
    }
  }
  SUBCASE("idempotent on already-standardized input") {
    const auto [twice, rec2] = standardize(once);
    CHECK(max_abs_diff(once.X, twice.X) <= 1e-12);
    CHECK((once.y - twice.y).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((rec2.col_scales.array() - 1.0).abs().maxCoeff() <= 1e-12);
  }
  SUBCASE("round trip back to original units") {
    const RegressionProblem back = unstandardize(once, rec1);
    const double scale = raw.X.cwiseAbs().maxCoeff();
    CHECK(max_abs_diff(raw.X, back.X) <= 1e-12 * scale);
    CHECK((raw.y - back.y).cwiseAbs().maxCoeff() <=
          1e-12 * raw.y.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("standardize: constant columns are dropped, all-constant errors") {
  RegressionProblem problem = make_regression(11, 10, 4);
  problem.X.col(2).setConstant(5.0);

  const auto [standardized, record] = standardize(problem);
  CHECK(standardized.n_features() == problem.n_features() - 1);
  CHECK(record.col_scales[2] == 0.0);
  CHECK(record.n_dropped() == 1);

  // Round trip still reconstructs the constant column.
  const RegressionProblem back = unstandardize(standardized, record);
  CHECK(max_abs_diff(problem.X, back.X) <= 1e-10);

  RegressionProblem degenerate;
  degenerate.X = Eigen::MatrixXd::Ones(4, 3);
  degenerate.y = Eigen::VectorXd::LinSpaced(4, 0, 3);
  CHECK_THROWS_AS(standardize(degenerate), DegenerateInputError);
}

TEST_CASE("coefficient mapping to original units") {
  const RegressionProblem raw = make_regression(21, 25, 5);
  const auto [problem, record] = standardize(raw);
  Rng rng(3);
  Eigen::VectorXd beta_std(problem.n_features());
  for (Eigen::Index j = 0; j < beta_std.size(); ++j) beta_std[j] = rng.normal();

  const Eigen::VectorXd beta_orig = coefficients_to_original(beta_std, record);
  const double intercept = intercept_for_original(beta_orig, record);

  // Predictions must agree in both coordinate systems.
  const Eigen::VectorXd pred_std = (problem.X * beta_std).array() + record.y_mean;
  const Eigen::VectorXd pred_orig = (raw.X * beta_orig).array() + intercept;
  CHECK((pred_std - pred_orig).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("prostate-shaped fixture loads as 97 x 8") {
  // Uses the real clinical file when present, the shipped stand-in otherwise.
  const char* dir = std::getenv("SVEN_DATA_DIR");
  std::filesystem::path base = dir ? dir : "data";
  std::filesystem::path file = base / "prostate.csv";
  if (!std::filesystem::exists(file)) file = base / "synthetic_prostate.csv";
  if (!std::filesystem::exists(file)) {
    MESSAGE("no prostate-shaped file found; skipping");
    return;
  }
  const RegressionProblem problem = load_dense_csv(file.string(), true);
  CHECK(problem.n_samples() == 97);
  CHECK(problem.n_features() == 8);
}
