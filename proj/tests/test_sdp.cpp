#include <doctest.h>

#include <random>

#include "random_util.hpp"
#include "symext/error.hpp"
#include "symext/oracle.hpp"
#include "symext/reduction.hpp"
#include "symext/sdp.hpp"

using namespace symext;

namespace {

std::shared_ptr<const ReducedProblem> reduced(int d, int k) {
  return std::make_shared<const ReducedProblem>(compile(d, d, k));
}

double witness_min_eigenvalue(const ConicProblem& p, const Certificate& c) {
  double worst = 1e300;
  for (const auto& z : p.map->adjoint(c.dual)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (z + z.adjoint()));
    worst = std::min(worst, eig.eigenvalues().minCoeff());
  }
  return worst;
}

}  // namespace

TEST_CASE("block algebra") {
  std::mt19937_64 rng(1);
  const auto a = testutil::random_blocks({3, 2}, rng);
  const auto b = testutil::random_blocks({3, 2}, rng);
  CHECK(inner(a, b) == doctest::Approx((a[0].adjoint() * b[0]).trace().real() + (a[1].adjoint() * b[1]).trace().real()));
  CHECK(norm(a) == doctest::Approx(std::sqrt(inner(a, a))));
  const auto v = coordinates(a);
  CHECK(v.norm() == doctest::Approx(norm(a)));
  const auto back = from_coordinates(v, {3, 2});
  CHECK((back[0] - a[0]).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((back[1] - a[1]).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("psd projection") {
  std::mt19937_64 rng(2);
  const auto x = testutil::random_blocks({4}, rng);
  const auto p = project_psd(x);
  CHECK(min_eigenvalue(p) > -1e-12);
  CHECK((project_psd(p)[0] - p[0]).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("boundary_from_c") {
  CHECK(boundary_from_c(0.0, 3) == 0.0);
  CHECK(boundary_from_c(1.0, 3) == doctest::Approx(1.0));
  CHECK(boundary_from_c(2.0 / 3.0, 2) == doctest::Approx(0.8));
  CHECK_THROWS_AS(boundary_from_c(1.5, 2), InvalidArgument);
}

TEST_CASE("werner k = 2 verdicts") {
  const auto p = reduced(2, 2);
  const auto below = solve_feasibility(extension_problem(p, werner(2, 0.5)));
  CHECK(below.status == SolveStatus::feasible);
  CHECK(below.residuals.eq <= 1e-7);
  CHECK(below.residuals.cone >= -1e-8);
  CHECK_FALSE(below.certificate);
  const auto above = solve_feasibility(extension_problem(p, werner(2, 0.95)));
  CHECK(above.status != SolveStatus::feasible);
}

TEST_CASE("constructed feasible instance") {
  std::mt19937_64 rng(3);
  const auto p = std::make_shared<const ReducedProblem>(compile(3, 2, 3));
  const auto x0 = testutil::random_blocks(p->block_sizes(), rng, true);
  const Eigen::MatrixXcd b = p->apply_marginal(x0);
  const auto r = solve_feasibility(extension_problem(p, b));
  CHECK(r.status == SolveStatus::feasible);
  CHECK(r.residuals.eq < 1e-7);
  CHECK((p->apply_marginal(r.blocks) - b).norm() < 1e-7);
}

TEST_CASE("singlet is not 3-extendible") {
  const auto problem = extension_problem(reduced(2, 3), werner(2, 1.0));
  const auto r = solve_feasibility(problem);
  REQUIRE(r.status == SolveStatus::infeasible_certified);
  REQUIRE(r.certificate);
  const auto& c = *r.certificate;
  CHECK(norm(c.dual) == doctest::Approx(1.0));
  CHECK(inner(problem.target, c.dual) <= -1e-6);
  CHECK(witness_min_eigenvalue(problem, c) >= 1e-7);
  CHECK(verify_certificate(problem, c));
}

TEST_CASE("determinism") {
  const auto problem = extension_problem(reduced(2, 4), werner(2, 0.6));
  const auto a = solve_feasibility(problem);
  const auto b = solve_feasibility(problem);
  CHECK(a.status == b.status);
  CHECK(a.iterations == b.iterations);
  for (std::size_t i = 0; i < a.blocks.size(); ++i) CHECK((a.blocks[i] - b.blocks[i]).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("bisection on (2,2)") {
  const auto p = reduced(2, 2);
  const auto shape = extension_problem(p, maximally_mixed({2, 2}));
  const auto r = maximize_interpolation(shape, {maximally_mixed({2, 2}).data()}, {werner(2, 1.0).data()}, 5e-4);
  CHECK(std::abs(r.c_star - 2.0 / 3.0) < 5e-4);
  CHECK(r.upper - r.lower <= 5e-4);
  CHECK(std::abs(boundary_from_c(r.c_star, 2) - 0.8) < 1e-3);
  CHECK_FALSE(r.not_converged_probe);
  for (const auto& a : r.probes)
    for (const auto& b : r.probes)
      if (a.c < b.c && b.status == SolveStatus::feasible) CHECK(a.status == SolveStatus::feasible);
}

TEST_CASE("not-converged is reported, never infeasible") {
  SolverOptions opts;
  opts.max_iter = 3;
  opts.certificate_interval = 1000;
  const auto r = solve_feasibility(extension_problem(reduced(2, 3), werner(2, 0.7)), opts);
  CHECK(r.status == SolveStatus::not_converged);
  CHECK(r.iterations == 3);
}

TEST_CASE("feasible verdicts hold in the full space") {
  for (auto [d, k] : {std::pair{2, 2}, {2, 3}, {3, 2}, {2, 4}, {3, 3}}) {
    CAPTURE(d);
    CAPTURE(k);
    const auto p = reduced(d, k);
    const auto basis = oracle::schur_basis(*p);
    for (double alpha : {-1.0, 0.0, 0.3, 0.6}) {
      const auto rho = werner(d, alpha);
      const auto r = solve_feasibility(extension_problem(p, rho));
      if (r.status != SolveStatus::feasible) continue;
      const auto check = oracle::check_extension(oracle::embed_blocks(r.blocks, basis, d), rho, k);
      CHECK(check.min_eigenvalue >= -1e-6);
      CHECK(check.marginal_error <= 1e-6);
      CHECK(check.symmetry_error <= 1e-6);
    }
  }
}

TEST_CASE("naive and reduced boundaries agree") {
  for (auto [d, k] : {std::pair{2, 2}, {2, 3}}) {
    const Blocks t0{maximally_mixed({d, d}).data()};
    const Blocks t1{werner(d, 1.0).data()};
    const auto red = maximize_interpolation(extension_problem(reduced(d, k), maximally_mixed({d, d})), t0, t1, 5e-4);
    const auto naive_shape = oracle::naive_extension_sdp(maximally_mixed({d, d}), k);
    Blocks n0 = naive_shape.target;
    Blocks n1 = naive_shape.target;
    n1[0] = t1[0];
    const auto naive = maximize_interpolation(naive_shape, n0, n1, 5e-4);
    CHECK(std::abs(red.c_star - naive.c_star) <= 2 * 5e-4);
  }
}

TEST_CASE("naive map adjoint and reduced map adjoint") {
  const auto p = reduced(3, 2);
  CHECK(adjoint_mismatch(MarginalMap(p), 10, 9) < 1e-10);
  CHECK(adjoint_mismatch(oracle::NaiveExtensionMap(3, 3, 2), 5, 9) < 1e-10);
}
