#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "random_util.hpp"
#include "symext/reduction.hpp"
#include "symext/sdpa.hpp"

using namespace symext;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("realification preserves the spectrum bottom") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::MatrixXcd h = testutil::random_hermitian(1 + trial % 7, rng);
    const Eigen::MatrixXd r = realify(h);
    CHECK((r - r.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const double complex_min = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h).eigenvalues().minCoeff();
    const double real_min = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(r).eigenvalues().minCoeff();
    CHECK(std::abs(complex_min - real_min) < 1e-10);
  }
}

TEST_CASE("export of the (2,1,2) problem") {
  const auto p = std::make_shared<const ReducedProblem>(compile(2, 1, 2));
  const Eigen::MatrixXcd target = Eigen::MatrixXcd::Identity(2, 2) / 2.0;
  const auto problem = extension_problem(p, target);
  const auto file = to_sdpa(problem);
  CHECK(file.block_struct == std::vector<int>{6, 2});
  CHECK(file.m == 4);

  // F_t . R(X) reproduces the complex constraint for random X.
  std::mt19937_64 rng(8);
  const auto x = testutil::random_blocks(p->block_sizes(), rng);
  const Eigen::VectorXd phi = coordinates({p->apply_marginal(x)});
  for (int t = 1; t <= file.m; ++t) {
    double value = 0.0;
    for (int b = 1; b <= 2; ++b) value += (file.matrix(t, b).array() * realify(x[static_cast<std::size_t>(b - 1)]).array()).sum();
    CHECK(value == doctest::Approx(phi(t - 1)).epsilon(1e-12));
  }
  CHECK(file.c[0] == doctest::Approx(0.5));
  CHECK(file.c[1] == doctest::Approx(0.5));
}

TEST_CASE("file round trip and sidecar") {
  const auto dir = std::filesystem::temp_directory_path() / "symext_sdpa_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "werner.dat-s").string();
  const auto p = std::make_shared<const ReducedProblem>(compile(2, 2, 3));
  const auto problem = extension_problem(p, werner(2, 0.6));
  export_sdpa(problem, path, p.get());
  const auto back = read_sdpa(path);
  const auto direct = to_sdpa(problem);
  CHECK(back.block_struct == direct.block_struct);
  CHECK(back.block_struct == std::vector<int>{16, 8});
  CHECK(back.m == direct.m);
  CHECK(back.entries.size() == direct.entries.size());
  for (std::size_t i = 0; i < back.c.size(); ++i) CHECK(back.c[i] == direct.c[i]);
  for (const auto& e : back.entries) CHECK(e.i <= e.j);

  const auto labels = nlohmann::json::parse(slurp(labels_path(path)));
  CHECK(labels["blocks"].size() == 2);
  CHECK(labels["blocks"][0]["label"] == "[3]");
  CHECK(labels["blocks"][0]["rows"].size() == 8);
  CHECK(labels["constraints"].size() == 16);

  const std::string first = slurp(path);
  export_sdpa(problem, path, p.get());
  CHECK(slurp(path) == first);
  std::filesystem::remove_all(dir);
}

TEST_CASE("labels path") {
  CHECK(labels_path("out/problem.dat-s") == "out/problem.labels.json");
  CHECK(labels_path("a.b/problem") == "a.b/problem.labels.json");
}

TEST_CASE("reader rejects garbage") {
  std::istringstream bad("2 = mDIM\n1 = nBLOCK\n2\n1.0\n");
  CHECK_THROWS(read_sdpa(bad));
}
