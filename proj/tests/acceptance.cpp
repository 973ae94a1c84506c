// Acceptance suite: one PASS/FAIL line per criterion, details indented.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"
#include "random_util.hpp"
#include "symext/oracle.hpp"
#include "symext/reduction.hpp"
#include "symext/sdp.hpp"

using namespace symext;
using nlohmann::json;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::function<bool(std::vector<std::string>&)> body;
};

json run_cli(std::vector<std::string> args, int& code) {
  args.insert(args.begin(), "symext");
  args.push_back("--json");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  try {
    return json::parse(out.str());
  } catch (const json::exception&) {
    return json();
  }
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double e = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, e);
  return buf;
}

double analytic_boundary(int d, int k) { return static_cast<double>(k + d * d - d) / (k * d + d - 1); }

bool werner_case(int d, int k, double table, double limit_s, std::vector<std::string>& log) {
  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  const json j = run_cli({"werner-boundary", "-d", std::to_string(d), "-k", std::to_string(k)}, code);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (code != 0 || !j.contains("alpha_star")) {
    log.push_back("(" + std::to_string(d) + "," + std::to_string(k) + ") command failed");
    return false;
  }
  const double alpha = j["alpha_star"].get<double>();
  const double exact = analytic_boundary(d, k);
  const bool ok = std::abs(alpha - table) <= 1e-3 && std::abs(alpha - exact) <= 1e-3 && wall <= limit_s;
  log.push_back(fmt("(%.0f,%.0f) alpha* = %.6f", d, k, alpha) + fmt(" table %.4f analytic %.6f", table, exact) +
                fmt(" time %.1f s", wall) + (ok ? "" : "  <-- out of tolerance"));
  return ok;
}

std::string square_list(const std::vector<long>& dims) {
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? " + " : "") + std::to_string(dims[i]) + "^2";
  return s;
}

BigInt independent_power(int base, int exp) {
  BigInt r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

BigInt independent_binomial(int n, int r) {
  BigInt out = 1;
  for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

bool criterion_dims(std::vector<std::string>& log) {
  struct Row {
    int d, k;
    long naive, search;
    std::vector<long> blocks;
  };
  const std::vector<Row> rows = {
      {3, 3, 729, 165, {10, 8, 1}},
      {3, 4, 6561, 495, {15, 15, 6, 3}},
      {3, 5, 59049, 1287, {21, 24, 15, 6, 3}},
      {3, 6, 531441, 3003, {28, 35, 27, 10, 10, 8, 1}},
      {4, 3, 4096, 816, {20, 20, 4}},
      {4, 4, 65536, 3876, {35, 45, 20, 15, 1}},
      {4, 5, 1048576, 15504, {56, 84, 60, 36, 20, 4}},
  };
  bool all = true;
  for (const auto& r : rows) {
    int code = 0;
    const json j = run_cli({"dims", "-d", std::to_string(r.d), "-k", std::to_string(r.k)}, code);
    const bool ok = code == 0 && j["naive_dim"] == r.naive && j["search_dim"] == r.search &&
                    j["squares"] == square_list(r.blocks);
    log.push_back("(" + std::to_string(r.d) + "," + std::to_string(r.k) + ") (" + j["naive_dim"].dump() + "," +
                  j["search_dim"].dump() + ") " + j["squares"].get<std::string>() + (ok ? "" : "  <-- mismatch"));
    all = all && ok;
  }
  return all;
}

bool criterion_identities(std::vector<std::string>& log) {
  int checked = 0;
  bool all = true;
  for (int d = 2; d <= 5; ++d)
    for (int k = 1; k <= 8; ++k) {
      BigInt sum_md = 0;
      BigInt sum_dd = 0;
      for (const auto& shape : enumerate_partitions(k, d)) {
        const BigInt m = multiplicity(shape);
        const BigInt dim = weyl_dimension(shape, d);
        sum_md += m * dim;
        sum_dd += dim * dim;
      }
      const bool ok = sum_md == independent_power(d, k) && sum_dd == independent_binomial(d * d - 1 + k, k);
      if (!ok) log.push_back("identity fails at d=" + std::to_string(d) + " k=" + std::to_string(k));
      all = all && ok;
      ++checked;
    }
  log.push_back(std::to_string(checked) + " (d,k) pairs checked exactly");
  return all;
}

bool criterion_algebra(std::vector<std::string>& log) {
  double comm = 0.0, herm = 0.0, cas = 0.0, trace = 0.0;
  int irreps = 0;
  for (int d = 1; d <= 4; ++d)
    for (int k = 1; k <= 5; ++k)
      for (const auto& shape : enumerate_partitions(k, d)) {
        const IrrepGenerators g(shape, d);
        comm = std::max(comm, commutation_residual(g));
        cas = std::max(cas, casimir_residual(g));
        Eigen::MatrixXcd sum = -static_cast<double>(k) * Eigen::MatrixXcd::Identity(g.dimension(), g.dimension());
        for (int a = 0; a < d; ++a) {
          sum += g.generator(a, a);
          for (int b = 0; b < d; ++b)
            herm = std::max(herm, (g.generator(a, b).adjoint() - g.generator(b, a)).cwiseAbs().maxCoeff());
        }
        trace = std::max(trace, sum.cwiseAbs().maxCoeff());
        ++irreps;
      }
  log.push_back(std::to_string(irreps) + " irreps; max residuals: " +
                fmt("commutation %.1e, hermiticity %.1e, casimir %.1e, trace %.1e", comm, herm, cas, trace));
  return comm < 1e-10 && herm < 1e-10 && cas < 1e-10 && trace < 1e-10;
}

bool criterion_oracle(std::vector<std::string>& log) {
  std::mt19937_64 rng(20240601);
  bool all = true;
  for (auto [d, k] : {std::pair{2, 2}, {2, 3}, {3, 2}}) {
    const auto problem = compile(d, d, k);
    const auto basis = oracle::schur_basis(problem);
    std::vector<int> dims{d};
    for (int s = 0; s < k; ++s) dims.push_back(d);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const auto x = testutil::random_blocks(problem.block_sizes(), rng);
      const Eigen::MatrixXcd naive = partial_trace(oracle::embed_blocks(x, basis, d), dims, {0, 1});
      worst = std::max(worst, (problem.apply_marginal(x) - naive).cwiseAbs().maxCoeff());
    }
    log.push_back(fmt("(%.0f,%.0f) map mismatch over 50 samples: %.2e", d, k, worst));
    all = all && worst < 1e-8;
  }
  const double eps_c = 5e-4;
  for (auto [d, k] : {std::pair{2, 2}, {2, 3}}) {
    const DensityMatrix mixed = maximally_mixed({d, d});
    const Blocks t0{mixed.data()};
    const Blocks t1{werner(d, 1.0).data()};
    auto reduced = std::make_shared<const ReducedProblem>(compile(d, d, k));
    const auto red = maximize_interpolation(extension_problem(reduced, mixed), t0, t1, eps_c);
    const auto shape = oracle::naive_extension_sdp(mixed, k);
    Blocks n1 = shape.target;
    n1[0] = t1[0];
    const auto naive = maximize_interpolation(shape, shape.target, n1, eps_c);
    const double gap = std::abs(red.c_star - naive.c_star);
    log.push_back(fmt("(%.0f,%.0f) c* reduced %.6f naive %.6f", d, k, red.c_star, naive.c_star) +
                  fmt(" |diff| %.1e", gap));
    all = all && gap <= 2 * eps_c && !red.not_converged_probe && !naive.not_converged_probe;
  }
  return all;
}

Eigen::MatrixXcd span_projector(const std::vector<Eigen::VectorXcd>& v) {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(v.front().size(), v.front().size());
  for (const auto& x : v) p += x * x.adjoint();
  return p;
}

bool criterion_fixtures(std::vector<std::string>& log) {
  bool all = true;
  // Coefficients through the reduced map: fixture vector beta, alpha become
  // GT-basis coordinates u_beta, u_alpha; the single-block marginal of
  // u_beta u_alpha^H, times k = 2, is the M matrix contribution.
  const auto problem = compile(3, 1, 2);
  const auto basis = oracle::schur_basis(problem);
  struct Case {
    std::size_t block;
    std::vector<Eigen::VectorXcd> phi;
    std::vector<oracle::fixtures::CoefficientTerm> terms;
    const char* name;
  };
  const std::vector<Case> cases = {
      {0, oracle::fixtures::two_qutrit_symmetric(), oracle::fixtures::two_qutrit_symmetric_coefficients(), "symmetric"},
      {1, oracle::fixtures::two_qutrit_antisymmetric(), oracle::fixtures::two_qutrit_antisymmetric_coefficients(),
       "antisymmetric"},
  };
  for (const auto& c : cases) {
    const Eigen::MatrixXcd& v = basis[c.block].front().columns;
    double forbidden = 0.0;
    double mismatch = 0.0;
    int nonzero = 0;
    const int n = static_cast<int>(c.phi.size());
    for (int alpha = 1; alpha <= n; ++alpha)
      for (int beta = 1; beta <= n; ++beta) {
        const Eigen::VectorXcd ua = v.adjoint() * c.phi[static_cast<std::size_t>(alpha - 1)];
        const Eigen::VectorXcd ub = v.adjoint() * c.phi[static_cast<std::size_t>(beta - 1)];
        Blocks x = zeros_like(problem.block_sizes());
        x[c.block] = ub * ua.adjoint();
        const Eigen::MatrixXcd m = 2.0 * problem.apply_marginal(x) / problem.multiplicity(c.block);
        for (int a = 0; a < 3; ++a)
          for (int b = a; b < 3; ++b) {
            double expected = 0.0;
            for (const auto& t : c.terms)
              if (t.a == a && t.b == b && t.alpha == alpha && t.beta == beta) expected = t.value;
            if (expected == 0.0) {
              forbidden = std::max(forbidden, std::abs(m(a, b)));
            } else {
              mismatch = std::max(mismatch, std::abs(m(a, b) - expected));
              ++nonzero;
            }
          }
      }
    log.push_back(std::string(c.name) + fmt(": %.0f table terms, max mismatch %.1e, max forbidden term %.1e", nonzero,
                                             mismatch, forbidden));
    all = all && nonzero == static_cast<int>(c.terms.size()) && mismatch < 1e-10 && forbidden < 1e-12;
  }

  const auto isos = oracle::build_isometries(Partition({2, 1}), 3, 3);
  const Eigen::MatrixXcd ours =
      isos[0].columns * isos[0].columns.adjoint() + isos[1].columns * isos[1].columns.adjoint();
  auto both = oracle::fixtures::three_qutrit_mixed_first();
  const auto second = oracle::fixtures::three_qutrit_mixed_second();
  both.insert(both.end(), second.begin(), second.end());
  const double span = (span_projector(both) - ours).cwiseAbs().maxCoeff();
  double invariance = 0.0;
  for (const auto& list : {oracle::fixtures::three_qutrit_mixed_first(), second}) {
    const Eigen::MatrixXcd p = span_projector(list);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const Eigen::MatrixXcd t = oracle::collective_generator(3, 3, a, b);
        invariance = std::max(invariance, (p * t * p - t * p).cwiseAbs().maxCoeff());
      }
  }
  log.push_back(fmt("[2,1] isotypic projector mismatch %.1e, per-copy invariance defect %.1e", span, invariance));
  return all && span < 1e-10 && invariance < 1e-10;
}

bool criterion_soundness(std::vector<std::string>& log) {
  int feasible = 0;
  int total = 0;
  double worst_eig = 0.0, worst_marginal = 0.0, worst_sym = 0.0;
  bool all = true;
  std::mt19937_64 rng(77);
  auto verify = [&](const ReducedProblem& problem, const std::vector<std::vector<oracle::SubspaceIsometry>>& basis,
                    const DensityMatrix& rho, const SolveResult& r) {
    ++total;
    if (r.status != SolveStatus::feasible) return;
    ++feasible;
    const auto c = oracle::check_extension(oracle::embed_blocks(r.blocks, basis, problem.d_A()), rho, problem.k());
    worst_eig = std::min(worst_eig, c.min_eigenvalue);
    worst_marginal = std::max(worst_marginal, c.marginal_error);
    worst_sym = std::max(worst_sym, c.symmetry_error);
    if (c.min_eigenvalue < -1e-6 || c.marginal_error > 1e-6 || c.symmetry_error > 1e-6) all = false;
  };
  for (auto [d, k] : {std::pair{2, 2}, {2, 3}, {2, 4}, {2, 5}, {3, 2}, {3, 3}, {3, 4}}) {
    auto problem = std::make_shared<const ReducedProblem>(compile(d, d, k));
    const auto basis = oracle::schur_basis(*problem);
    for (int i = 0; i <= 20; ++i) {
      const DensityMatrix rho = werner(d, -1.0 + 0.1 * i);
      verify(*problem, basis, rho, solve_feasibility(extension_problem(problem, rho)));
    }
    // Random separable states: mixtures of product states.
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::MatrixXcd sep = Eigen::MatrixXcd::Zero(d * d, d * d);
      for (int term = 0; term < 3; ++term) {
        const Eigen::MatrixXcd a = testutil::random_psd(d, rng);
        const Eigen::MatrixXcd b = testutil::random_psd(d, rng);
        for (int r = 0; r < d; ++r)
          for (int c = 0; c < d; ++c) sep.block(r * d, c * d, d, d) += a(r, c) * b;
      }
      sep /= sep.trace().real();
      sep = 0.5 * (sep + sep.adjoint()).eval();
      const DensityMatrix rho({d, d}, sep);
      verify(*problem, basis, rho, solve_feasibility(extension_problem(problem, rho)));
    }
    // The bisection's best point.
    const DensityMatrix mixed = maximally_mixed({d, d});
    const auto best = maximize_interpolation(extension_problem(problem, mixed), {mixed.data()},
                                             {werner(d, 1.0).data()}, 5e-4);
    const double c = best.lower;
    const DensityMatrix rho({d, d}, (1.0 - c) * mixed.data() + c * werner(d, 1.0).data());
    verify(*problem, basis, rho, best.best);
  }
  log.push_back(std::to_string(feasible) + " feasible verdicts out of " + std::to_string(total) + " re-verified" +
                fmt("; min eigenvalue %.1e, marginal error %.1e, symmetry error %.1e", worst_eig, worst_marginal,
                    worst_sym));
  return all && feasible > 0;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Werner boundary reproduction for (2,8) (2,10) (2,16) (3,3) (3,4)",
       [](std::vector<std::string>& log) {
         bool all = true;
         for (auto [d, k, table] : {std::tuple{2, 8, 0.588}, {2, 10, 0.571}, {2, 16, 0.545}, {3, 3, 0.818},
                                    {3, 4, 0.714}})
           all = werner_case(d, k, table, 300.0, log) && all;
         return all;
       }},
      {2, "Stretch scale (2,32) against 34/65 within 30 minutes",
       [](std::vector<std::string>& log) { return werner_case(2, 32, 34.0 / 65.0, 1800.0, log); }},
      {3, "Dimension table rows", criterion_dims},
      {4, "Dimension identities for 2 <= d <= 5, 1 <= k <= 8", criterion_identities},
      {5, "Algebra suite for k <= 5, d <= 4", criterion_algebra},
      {6, "Oracle equivalence of the reduced map and boundaries", criterion_oracle},
      {7, "Two- and three-qutrit fixtures", criterion_fixtures},
      {8, "Solver soundness in the full space", criterion_soundness},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    std::vector<std::string> log;
    bool ok = false;
    try {
      ok = c.body(log);
    } catch (const std::exception& e) {
      log.push_back(std::string("exception: ") + e.what());
    }
    std::printf("%s %d: %s\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str());
    for (const auto& line : log) std::printf("       %s\n", line.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
  }
  std::printf("N/A  9: Timing comparison against a third-party solver stack (not reproducible here; 4-8 substitute)\n");
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
