#include <doctest.h>
#include <unsupported/Eigen/KroneckerProduct>

#include <random>
#include <sstream>

#include "random_util.hpp"
#include "symext/error.hpp"
#include "symext/parallel.hpp"
#include "symext/states.hpp"

using namespace symext;

TEST_CASE("werner family") {
  for (int d : {2, 3, 4})
    for (double alpha : {-1.0, -0.3, 0.0, 0.5, 1.0}) {
      const auto rho = werner(d, alpha);
      const auto report = validate(rho);
      CHECK(report.hermitian);
      CHECK(report.trace_deviation < 1e-12);
      CHECK(report.min_eigenvalue > -1e-12);
    }
  CHECK_THROWS_AS(werner(1, 0.5), InvalidArgument);
  CHECK_THROWS_AS(werner(2, 1.5), InvalidArgument);
  // The singlet: werner(2, 1) is the antisymmetric projector over its rank.
  const auto singlet = werner(2, 1.0).data();
  CHECK(std::abs(singlet(1, 1) - 0.5) < 1e-14);
  CHECK(std::abs(singlet(1, 2) + 0.5) < 1e-14);
}

TEST_CASE("construction checks") {
  CHECK_THROWS_AS(DensityMatrix({2, 2}, Eigen::MatrixXcd::Identity(3, 3)), InvalidArgument);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix({2}, m), InvalidArgument);
  m /= 2.0;
  m(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix({2}, m), InvalidArgument);
}

TEST_CASE("partial trace") {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXcd a = testutil::random_hermitian(2, rng);
  const Eigen::MatrixXcd b = testutil::random_hermitian(3, rng);
  const Eigen::MatrixXcd c = testutil::random_hermitian(2, rng);
  Eigen::MatrixXcd abc = Eigen::kroneckerProduct(Eigen::kroneckerProduct(a, b).eval(), c);
  const Eigen::MatrixXcd ac = Eigen::kroneckerProduct(a, c);
  CHECK((partial_trace(abc, {2, 3, 2}, {0, 2}) - b.trace() * ac).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((partial_trace(abc, {2, 3, 2}, {1}) - a.trace() * c.trace() * b).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(partial_trace(abc, {2, 3, 2}, {}), InvalidArgument);
  CHECK_THROWS_AS(partial_trace(abc, {2, 3, 2}, {3}), InvalidArgument);
  CHECK_THROWS_AS(partial_trace(abc, {2, 3, 2}, {1, 1}), InvalidArgument);
  const auto mixed = maximally_mixed({2, 3});
  CHECK((partial_trace(mixed, {1}).data() - Eigen::MatrixXcd::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("tensor product and swap") {
  const auto rho = tensor_product(maximally_mixed({2}), werner(2, 0.2));
  CHECK(rho.dims() == std::vector<int>{2, 2, 2});
  const auto s = swap_operator(3);
  CHECK(((s * s) - Eigen::MatrixXcd::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("json round trip") {
  const auto rho = werner(3, 0.4);
  std::stringstream ss;
  write_json(ss, rho);
  const auto back = read_json(ss);
  CHECK(back.dims() == rho.dims());
  CHECK((back.data() - rho.data()).cwiseAbs().maxCoeff() == 0.0);
  std::istringstream bad(R"({"dims":[2],"data":[[1,0],[0,0]]})");
  CHECK_THROWS_AS(read_json(bad), InvalidArgument);
  std::istringstream wrong(R"({"dims":"x","data":[]})");
  CHECK_THROWS_AS(read_json(wrong), InvalidArgument);
}

TEST_CASE("parallel_for runs every index once") {
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) { if (i == 7) throw InvalidArgument("boom"); }), InvalidArgument);
}
