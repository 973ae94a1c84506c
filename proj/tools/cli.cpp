#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "symext/error.hpp"
#include "symext/parallel.hpp"
#include "symext/reduction.hpp"
#include "symext/sdp.hpp"
#include "symext/sdpa.hpp"

namespace symext::cli {

namespace {

using nlohmann::json;

struct RunConfig {
  int d = 0;
  int k = 0;
  int d_A = 0;
  std::string state;
  std::string input;
  double eps_eq = SolverOptions{}.eps_eq;
  double eps_psd = SolverOptions{}.eps_psd;
  double eps_c = 5e-4;
  long max_iter = SolverOptions{}.max_iter;
  double cap = CompileOptions{}.cap;
  int jobs = 1;
  std::string out;
  bool json = false;
  std::string dump_gt;
  std::string dump_problem;
};

double sig12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

json big(const BigInt& v) {
  if (v <= BigInt(1) << 53) return v.convert_to<unsigned long long>();
  return v.str();
}

json report_json(const ParameterReport& r) {
  json blocks = json::array();
  for (std::size_t i = 0; i < r.shapes.size(); ++i)
    blocks.push_back({{"partition", r.shapes[i].rows()},
                      {"multiplicity", big(r.multiplicities[i])},
                      {"dimension", big(r.irrep_dims[i])},
                      {"block_size", big(r.block_sizes[i])}});
  return {{"d", r.d},
          {"d_A", r.d_A},
          {"k", r.k},
          {"naive_dim", big(r.naive_dim)},
          {"search_dim", big(r.search_dim)},
          {"blocks", std::move(blocks)}};
}

std::string squares(const ParameterReport& r) {
  std::string s;
  for (std::size_t i = 0; i < r.block_sizes.size(); ++i) s += (i ? " + " : "") + r.block_sizes[i].str() + "^2";
  return s;
}

SolverOptions solver_options(const RunConfig& cfg) {
  SolverOptions o;
  o.eps_eq = cfg.eps_eq;
  o.eps_psd = cfg.eps_psd;
  o.max_iter = cfg.max_iter;
  o.jobs = cfg.jobs;
  return o;
}

CompileOptions compile_options(const RunConfig& cfg) { return {cfg.cap, cfg.jobs}; }

void validate_tolerances(const RunConfig& cfg) {
  if (!(cfg.eps_eq > 0.0) || !(cfg.eps_psd > 0.0) || !(cfg.eps_c > 0.0))
    throw InvalidArgument("tolerances must be positive");
  if (cfg.max_iter < 1) throw InvalidArgument("--max-iter must be at least 1");
  if (!(cfg.cap > 0.0)) throw InvalidArgument("--cap must be positive");
  if (cfg.jobs < 1) throw InvalidArgument("--jobs must be at least 1");
}

DensityMatrix load_state(const RunConfig& cfg) {
  if (cfg.state.empty() == cfg.input.empty()) throw InvalidArgument("give exactly one of --state and --input");
  if (!cfg.state.empty()) return parse_state(cfg.state);
  std::ifstream in(cfg.input);
  if (!in) throw InvalidArgument("cannot open " + cfg.input);
  return read_json(in);
}

DensityMatrix bipartite_state(const RunConfig& cfg) {
  DensityMatrix rho = load_state(cfg);
  if (rho.dims().size() != 2) throw InvalidArgument("the state must have exactly two factors [d_A, d]");
  if (cfg.d_A != 0 && cfg.d_A != rho.dims()[0])
    throw InvalidArgument("--da " + std::to_string(cfg.d_A) + " does not match the state's first factor " +
                          std::to_string(rho.dims()[0]));
  if (cfg.d != 0 && cfg.d != rho.dims()[1])
    throw InvalidArgument("-d " + std::to_string(cfg.d) + " does not match the state's second factor " +
                          std::to_string(rho.dims()[1]));
  const auto report = validate(rho);
  if (report.min_eigenvalue < -1e-9) throw InvalidArgument("the state is not positive semidefinite");
  return rho;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw InvalidArgument("cannot write " + path);
  f << text;
}

void emit(const RunConfig& cfg, const json& j, const std::string& text, std::ostream& out) {
  if (cfg.json)
    out << j.dump(2) << '\n';
  else
    out << text;
  if (!cfg.out.empty()) write_text_file(cfg.out, j.dump(2) + "\n");
}

void dumps(const RunConfig& cfg, const ReducedProblem& problem, const DensityMatrix& rho) {
  if (!cfg.dump_gt.empty()) {
    std::ostringstream os;
    for (const auto& irrep : problem.irreps()) write_generators_json(os, irrep);
    write_text_file(cfg.dump_gt, os.str());
  }
  if (!cfg.dump_problem.empty()) {
    std::ostringstream os;
    write_problem_json(os, problem, &rho);
    write_text_file(cfg.dump_problem, os.str());
  }
}

int cmd_dims(const RunConfig& cfg, std::ostream& out) {
  const int d_A = cfg.d_A == 0 ? 1 : cfg.d_A;
  const auto report = parameter_report(catalog(cfg.k, cfg.d), d_A);
  json j = report_json(report);
  j["command"] = "dims";
  j["squares"] = squares(report);
  std::ostringstream text;
  text << "d = " << cfg.d << ", d_A = " << d_A << ", k = " << cfg.k << '\n';
  text << "naive parameters:   " << report.naive_dim << '\n';
  text << "reduced parameters: " << report.search_dim << '\n';
  text << "blocks: " << squares(report) << '\n';
  for (std::size_t i = 0; i < report.shapes.size(); ++i)
    text << "  " << std::left << std::setw(14) << report.shapes[i].to_string() << " m = " << report.multiplicities[i]
         << "  D = " << report.irrep_dims[i] << "  size = " << report.block_sizes[i] << '\n';
  emit(cfg, j, text.str(), out);
  return kFeasible;
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  validate_tolerances(cfg);
  const DensityMatrix rho = bipartite_state(cfg);
  const int d_A = rho.dims()[0];
  const int d = rho.dims()[1];
  auto problem = std::make_shared<const ReducedProblem>(compile(d, d_A, cfg.k, compile_options(cfg)));
  dumps(cfg, *problem, rho);
  const auto result = solve_feasibility(extension_problem(problem, rho), solver_options(cfg));

  json j;
  j["command"] = "check";
  j["status"] = to_string(result.status);
  j["k"] = cfg.k;
  j["dims"] = rho.dims();
  j["residuals"] = {{"eq", sig12(result.residuals.eq)}, {"cone", sig12(result.residuals.cone)}};
  j["iterations"] = result.iterations;
  j["wall_time"] = sig12(result.wall_time);
  if (result.certificate)
    j["certificate"] = {{"target_value", sig12(result.certificate->target_value)},
                        {"min_eigenvalue", sig12(result.certificate->min_eigenvalue)}};
  else
    j["certificate"] = nullptr;
  j["parameter_report"] = report_json(parameter_report(*problem));

  std::ostringstream text;
  text << std::setprecision(12);
  text << "status: " << to_string(result.status) << '\n';
  text << "k = " << cfg.k << ", dims = [" << d_A << ", " << d << "]\n";
  text << "eq residual:   " << result.residuals.eq << '\n';
  text << "cone residual: " << result.residuals.cone << '\n';
  text << "iterations:    " << result.iterations << '\n';
  text << "wall time:     " << result.wall_time << " s\n";
  if (result.certificate) {
    text << "certificate: <b, Y> = " << result.certificate->target_value
         << ", min eig of adjoint = " << result.certificate->min_eigenvalue << '\n';
  }
  emit(cfg, j, text.str(), out);
  return result.status == SolveStatus::feasible ? kFeasible : kNotFeasible;
}

int cmd_werner_boundary(const RunConfig& cfg, std::ostream& out) {
  validate_tolerances(cfg);
  if (cfg.d < 2) throw InvalidArgument("-d must be at least 2");
  const auto start = std::chrono::steady_clock::now();
  const int d = cfg.d;
  auto problem = std::make_shared<const ReducedProblem>(compile(d, d, cfg.k, compile_options(cfg)));
  const DensityMatrix mixed = maximally_mixed({d, d});
  const auto result = maximize_interpolation(extension_problem(problem, mixed), {mixed.data()},
                                             {werner(d, 1.0).data()}, cfg.eps_c, solver_options(cfg));
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double alpha = boundary_from_c(result.c_star, d);
  const double analytic = static_cast<double>(cfg.k + d * d - d) / (cfg.k * d + d - 1);

  json probes = json::array();
  for (const auto& p : result.probes)
    probes.push_back({{"c", sig12(p.c)},
                      {"status", to_string(p.status)},
                      {"iterations", p.iterations},
                      {"eq_residual", sig12(p.eq_residual)},
                      {"wall_time", sig12(p.wall_time)}});
  json j = {{"command", "werner-boundary"},
            {"d", d},
            {"k", cfg.k},
            {"eps_c", sig12(cfg.eps_c)},
            {"c_star", sig12(result.c_star)},
            {"c_lower", sig12(result.lower)},
            {"c_upper", sig12(result.upper)},
            {"alpha_star", sig12(alpha)},
            {"alpha_lower", sig12(boundary_from_c(result.lower, d))},
            {"alpha_upper", sig12(boundary_from_c(result.upper, d))},
            {"analytic", sig12(analytic)},
            {"not_converged_probe", result.not_converged_probe},
            {"wall_time", sig12(wall)},
            {"probes", std::move(probes)}};

  std::ostringstream text;
  text << std::setprecision(12);
  text << "d = " << d << ", k = " << cfg.k << '\n';
  for (const auto& p : result.probes)
    text << "  c = " << std::setw(14) << std::left << p.c << ' ' << std::setw(21) << to_string(p.status)
         << " iterations = " << p.iterations << '\n';
  text << "c*     = " << result.c_star << "  [" << result.lower << ", " << result.upper << "]\n";
  text << "alpha* = " << alpha << '\n';
  text << "analytic (k + d^2 - d) / (kd + d - 1) = " << analytic << '\n';
  if (result.not_converged_probe) text << "warning: some probes did not converge and were treated as infeasible\n";
  text << "wall time: " << wall << " s\n";
  emit(cfg, j, text.str(), out);
  return kFeasible;
}

int cmd_export(const RunConfig& cfg, std::ostream& out) {
  if (cfg.out.empty()) throw InvalidArgument("export needs --out");
  const DensityMatrix rho = bipartite_state(cfg);
  const int d_A = rho.dims()[0];
  const int d = rho.dims()[1];
  auto problem = std::make_shared<const ReducedProblem>(compile(d, d_A, cfg.k, compile_options(cfg)));
  dumps(cfg, *problem, rho);
  const auto conic = extension_problem(problem, rho);
  try {
    export_sdpa(conic, cfg.out, problem.get());
  } catch (const std::runtime_error& e) {
    throw InvalidArgument(e.what());
  }
  const auto sizes = problem->block_sizes();
  json blocks = json::array();
  std::ostringstream text;
  text << "wrote " << cfg.out << " and " << labels_path(cfg.out) << '\n';
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    blocks.push_back({{"label", conic.block_labels[b]}, {"size", 2 * sizes[b]}});
    text << "  block " << b + 1 << ": " << conic.block_labels[b] << "  realified size " << 2 * sizes[b] << '\n';
  }
  json j = {{"command", "export"},
            {"sdpa", cfg.out},
            {"labels", labels_path(cfg.out)},
            {"k", cfg.k},
            {"dims", rho.dims()},
            {"blocks", std::move(blocks)}};
  if (cfg.json) out << j.dump(2) << '\n';
  else out << text.str();
  return kFeasible;
}

void add_tolerances(CLI::App* app, RunConfig& cfg) {
  app->add_option("--eps-eq", cfg.eps_eq, "Equality residual tolerance")->capture_default_str();
  app->add_option("--eps-psd", cfg.eps_psd, "Eigenvalue tolerance")->capture_default_str();
  app->add_option("--max-iter", cfg.max_iter, "Iteration limit per solve")->capture_default_str();
}

void add_common(CLI::App* app, RunConfig& cfg) {
  app->add_option("--cap", cfg.cap, "Cap on total complex block entries")->capture_default_str();
  app->add_option("--jobs", cfg.jobs, "Worker threads (default: SYMEXT_JOBS or 1)");
  app->add_flag("--json", cfg.json, "Print JSON instead of text");
}

void add_input(CLI::App* app, RunConfig& cfg) {
  app->add_option("--state", cfg.state, "Built-in state: werner:d:alpha or mixed:dims");
  app->add_option("--input", cfg.input, "Density-matrix JSON file");
  app->add_option("--da", cfg.d_A, "Expected dimension of A");
  app->add_option("-d", cfg.d, "Expected dimension of B");
  app->add_option("--dump-gt", cfg.dump_gt, "Write GT generator matrices (JSON lines)");
  app->add_option("--dump-problem", cfg.dump_problem, "Write the compiled problem as JSON");
}

}  // namespace

DensityMatrix parse_state(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw InvalidArgument("state spec must be werner:d:alpha or mixed:dims");
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw InvalidArgument("bad integer '" + s + "' in state spec " + spec);
    return v;
  };
  if (kind == "werner") {
    const auto c2 = rest.find(':');
    if (c2 == std::string::npos) throw InvalidArgument("werner spec must be werner:d:alpha");
    const int d = to_int(rest.substr(0, c2));
    const std::string a = rest.substr(c2 + 1);
    std::size_t used = 0;
    double alpha = 0.0;
    try {
      alpha = std::stod(a, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != a.size() || a.empty()) throw InvalidArgument("bad alpha '" + a + "' in state spec " + spec);
    return werner(d, alpha);
  }
  if (kind == "mixed") {
    std::vector<int> dims;
    std::string token;
    for (char ch : rest + ",") {
      if (ch == 'x' || ch == ',') {
        dims.push_back(to_int(token));
        token.clear();
      } else {
        token += ch;
      }
    }
    return maximally_mixed(dims);
  }
  throw InvalidArgument("unknown state kind '" + kind + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symmetric-extension feasibility with Schur-Weyl block reduction", "symext"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.jobs = default_jobs();

  auto* dims = app.add_subcommand("dims", "Naive and reduced parameter counts");
  dims->add_option("-d", cfg.d, "Dimension of each B copy")->required()->check(CLI::PositiveNumber);
  dims->add_option("-k", cfg.k, "Number of B copies")->required()->check(CLI::PositiveNumber);
  dims->add_option("--da", cfg.d_A, "Dimension of A (default 1)")->check(CLI::PositiveNumber);
  dims->add_option("--out", cfg.out, "Also write the JSON report here");
  dims->add_flag("--json", cfg.json, "Print JSON instead of text");

  auto* check = app.add_subcommand("check", "Decide k-extendibility of a state");
  check->add_option("-k", cfg.k, "Number of B copies")->required()->check(CLI::PositiveNumber);
  add_input(check, cfg);
  add_tolerances(check, cfg);
  add_common(check, cfg);
  check->add_option("--out", cfg.out, "Also write the JSON verdict here");

  auto* boundary = app.add_subcommand("werner-boundary", "Bisect the Werner extendibility boundary");
  boundary->add_option("-d", cfg.d, "Local dimension")->required()->check(CLI::PositiveNumber);
  boundary->add_option("-k", cfg.k, "Number of B copies")->required()->check(CLI::PositiveNumber);
  boundary->add_option("--eps-c", cfg.eps_c, "Bisection resolution in c")->capture_default_str();
  add_tolerances(boundary, cfg);
  add_common(boundary, cfg);
  boundary->add_option("--out", cfg.out, "Also write the JSON report here");

  auto* exporter = app.add_subcommand("export", "Write the reduced problem in SDPA sparse format");
  exporter->add_option("-k", cfg.k, "Number of B copies")->required()->check(CLI::PositiveNumber);
  add_input(exporter, cfg);
  add_common(exporter, cfg);
  exporter->add_option("--out", cfg.out, "SDPA output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*dims) return cmd_dims(cfg, out);
    if (*check) return cmd_check(cfg, out);
    if (*boundary) return cmd_werner_boundary(cfg, out);
    return cmd_export(cfg, out);
  } catch (const TooLarge& e) {
    err << "error: " << e.what() << '\n';
    return kResource;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kNotFeasible;
  }
}

}  // namespace symext::cli
