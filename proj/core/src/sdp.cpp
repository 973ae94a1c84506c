#include "symext/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "symext/error.hpp"
#include "symext/parallel.hpp"

namespace symext {

double inner(const Blocks& a, const Blocks& b) {
  if (a.size() != b.size()) throw InvalidArgument("inner: block count mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i].array().conjugate() * b[i].array()).real().sum();
  return acc;
}

double norm(const Blocks& a) {
  double acc = 0.0;
  for (const auto& m : a) acc += m.squaredNorm();
  return std::sqrt(acc);
}

Blocks zeros_like(const std::vector<Eigen::Index>& sizes) {
  Blocks out;
  out.reserve(sizes.size());
  for (auto n : sizes) out.push_back(Eigen::MatrixXcd::Zero(n, n));
  return out;
}

void axpy(double alpha, const Blocks& x, Blocks& y) {
  if (x.size() != y.size()) throw InvalidArgument("axpy: block count mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Eigen::VectorXd hermitian_coordinates(const Eigen::MatrixXcd& h) {
  const Eigen::Index n = h.rows();
  Eigen::VectorXd v(n * n);
  Eigen::Index p = 0;
  for (Eigen::Index i = 0; i < n; ++i) v(p++) = h(i, i).real();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      // Average the two triangles so slightly non-Hermitian input maps to
      // its Hermitian part.
      const std::complex<double> z = 0.5 * (h(i, j) + std::conj(h(j, i)));
      v(p++) = M_SQRT2 * z.real();
      v(p++) = M_SQRT2 * z.imag();
    }
  return v;
}

Eigen::MatrixXcd hermitian_from_coordinates(const Eigen::VectorXd& v, Eigen::Index n) {
  if (v.size() != n * n) throw InvalidArgument("hermitian_from_coordinates: size mismatch");
  Eigen::MatrixXcd h(n, n);
  Eigen::Index p = 0;
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = v(p++);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double re = v(p++) / M_SQRT2;
      const double im = v(p++) / M_SQRT2;
      h(i, j) = {re, im};
      h(j, i) = {re, -im};
    }
  return h;
}

Eigen::VectorXd coordinates(const Blocks& blocks) {
  Eigen::Index total = 0;
  for (const auto& b : blocks) total += b.rows() * b.rows();
  Eigen::VectorXd v(total);
  Eigen::Index offset = 0;
  for (const auto& b : blocks) {
    const Eigen::Index len = b.rows() * b.rows();
    v.segment(offset, len) = hermitian_coordinates(b);
    offset += len;
  }
  return v;
}

Blocks from_coordinates(const Eigen::VectorXd& v, const std::vector<Eigen::Index>& sizes) {
  Blocks out;
  Eigen::Index offset = 0;
  for (auto n : sizes) {
    out.push_back(hermitian_from_coordinates(v.segment(offset, n * n), n));
    offset += n * n;
  }
  if (offset != v.size()) throw InvalidArgument("from_coordinates: size mismatch");
  return out;
}

namespace {

Blocks random_hermitian(const std::vector<Eigen::Index>& sizes, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Blocks out;
  for (auto n : sizes) {
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = {gauss(rng), gauss(rng)};
    out.push_back(0.5 * (m + m.adjoint()));
  }
  return out;
}

}  // namespace

double adjoint_mismatch(const LinearMap& map, int probes, unsigned seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int p = 0; p < probes; ++p) {
    const Blocks x = random_hermitian(map.domain_sizes(), rng);
    const Blocks y = random_hermitian(map.codomain_sizes(), rng);
    const double lhs = inner(map.apply(x), y);
    const double rhs = inner(x, map.adjoint(y));
    worst = std::max(worst, std::abs(lhs - rhs) / (norm(x) * norm(y)));
  }
  return worst;
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::feasible:
      return "feasible";
    case SolveStatus::infeasible_certified:
      return "infeasible-certified";
    case SolveStatus::not_converged:
      return "not-converged";
  }
  return "unknown";
}

AffineProjector::AffineProjector(std::shared_ptr<const LinearMap> map)
    : map_(std::move(map)), codomain_(map_->codomain_sizes()) {
  Eigen::Index n = 0;
  for (auto s : codomain_) n += s * s;
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(j) = 1.0;
    gram.col(j) = coordinates(map_->apply(map_->adjoint(from_coordinates(e, codomain_))));
  }
  gram = 0.5 * (gram + gram.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const double top = std::max(eig.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < n; ++i)
    if (eig.eigenvalues()(i) > 1e-10 * top) kept.push_back(i);
  rank_ = static_cast<Eigen::Index>(kept.size());
  eigenvectors_.resize(n, rank_);
  inverse_eigenvalues_.resize(rank_);
  for (Eigen::Index c = 0; c < rank_; ++c) {
    eigenvectors_.col(c) = eig.eigenvectors().col(kept[static_cast<std::size_t>(c)]);
    inverse_eigenvalues_(c) = 1.0 / eig.eigenvalues()(kept[static_cast<std::size_t>(c)]);
  }
}

Blocks AffineProjector::solve_normal(const Blocks& r) const {
  const Eigen::VectorXd rhs = coordinates(r);
  const Eigen::VectorXd y = eigenvectors_ * (inverse_eigenvalues_.asDiagonal() * (eigenvectors_.transpose() * rhs));
  return from_coordinates(y, codomain_);
}

Blocks AffineProjector::project(const Blocks& x, const Blocks& b) const {
  Blocks r = map_->apply(x);
  axpy(-1.0, b, r);
  Blocks out = x;
  axpy(-1.0, map_->adjoint(solve_normal(r)), out);
  return out;
}

Blocks project_psd(const Blocks& x, int jobs) {
  Blocks out(x.size());
  parallel_for(x.size(), jobs, [&](std::size_t i) {
    const Eigen::MatrixXcd h = 0.5 * (x[i] + x[i].adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
    const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
    out[i] = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().adjoint();
  });
  return out;
}

double min_eigenvalue(const Blocks& x, int jobs) {
  std::vector<double> mins(x.size(), 0.0);
  parallel_for(x.size(), jobs, [&](std::size_t i) {
    if (x[i].rows() == 0) return;
    const Eigen::MatrixXcd h = 0.5 * (x[i] + x[i].adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h, Eigen::EigenvaluesOnly);
    mins[i] = eig.eigenvalues().minCoeff();
  });
  double out = std::numeric_limits<double>::infinity();
  for (double m : mins) out = std::min(out, m);
  return x.empty() ? 0.0 : out;
}

namespace {

/// map(X ./ w): the solver's change of variables.
class ScaledMap final : public LinearMap {
 public:
  ScaledMap(std::shared_ptr<const LinearMap> inner, std::vector<double> weights)
      : inner_(std::move(inner)), weights_(std::move(weights)) {}
  std::vector<Eigen::Index> domain_sizes() const override { return inner_->domain_sizes(); }
  std::vector<Eigen::Index> codomain_sizes() const override { return inner_->codomain_sizes(); }
  Blocks apply(const Blocks& x) const override { return inner_->apply(unscale(x)); }
  Blocks adjoint(const Blocks& y) const override { return unscale(inner_->adjoint(y)); }
  Blocks unscale(Blocks x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] /= weights_[i];
    return x;
  }

 private:
  std::shared_ptr<const LinearMap> inner_;
  std::vector<double> weights_;
};

std::shared_ptr<const LinearMap> scaled(const ConicProblem& problem) {
  if (problem.block_weights.empty()) return problem.map;
  if (problem.block_weights.size() != problem.map->domain_sizes().size())
    throw InvalidArgument("block_weights must have one entry per block");
  for (double w : problem.block_weights)
    if (!(w > 0.0)) throw InvalidArgument("block_weights must be positive");
  return std::make_shared<ScaledMap>(problem.map, problem.block_weights);
}

void check_target(const LinearMap& map, const Blocks& target) {
  const auto sizes = map.codomain_sizes();
  if (target.size() != sizes.size()) throw InvalidArgument("target block count does not match the constraint map");
  for (std::size_t i = 0; i < sizes.size(); ++i)
    if (target[i].rows() != sizes[i] || target[i].cols() != sizes[i])
      throw InvalidArgument("target block size does not match the constraint map");
}

}  // namespace

std::optional<Certificate> infeasibility_certificate(const ConicProblem& problem, const AffineProjector& projector,
                                                     const Blocks& direction, const SolverOptions& options) {
  // Y = (A A^H)^+ A(v) is the constraint-space preimage of v's component in
  // the range of A^H.
  Blocks y = projector.solve_normal(projector.map().apply(direction));
  const double scale = norm(y);
  if (!(scale > 0.0) || !std::isfinite(scale)) return std::nullopt;
  for (auto& m : y) m /= scale;

  const auto& map = *problem.map;
  if (problem.positive_direction) {
    const double lambda = min_eigenvalue(map.adjoint(y), options.jobs);
    const double mu = min_eigenvalue(map.adjoint(*problem.positive_direction), options.jobs);
    const double want = 100.0 * options.eps_psd;
    if (mu > 0.0 && lambda < want) axpy((want - lambda) / mu, *problem.positive_direction, y);
    const double n = norm(y);
    for (auto& m : y) m /= n;
  }

  Certificate cert;
  cert.target_value = inner(problem.target, y);
  cert.min_eigenvalue = min_eigenvalue(map.adjoint(y), options.jobs);
  cert.dual = std::move(y);
  if (cert.target_value <= -10.0 * options.eps_eq && cert.min_eigenvalue >= 10.0 * options.eps_psd) return cert;
  return std::nullopt;
}

bool verify_certificate(const ConicProblem& problem, const Certificate& certificate, double margin) {
  const double n = norm(certificate.dual);
  if (!(n > 0.0)) return false;
  const double value = inner(problem.target, certificate.dual) / n;
  const Blocks z = problem.map->adjoint(certificate.dual);
  for (const auto& block : z) {
    if (block.rows() == 0) continue;
    const Eigen::MatrixXcd h = 0.5 * (block + block.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() / n < margin) return false;
  }
  return value < -margin;
}

FeasibilitySolver::FeasibilitySolver(const ConicProblem& shape, SolverOptions options)
    : problem_(shape), options_(options), scaled_map_(scaled(shape)), projector_(scaled_map_) {
  if (!(options_.eps_eq > 0.0) || !(options_.eps_psd > 0.0)) throw InvalidArgument("solver tolerances must be positive");
  if (options_.max_iter < 1) throw InvalidArgument("max_iter must be positive");
  if (!(options_.relaxation > 0.0 && options_.relaxation < 2.0)) throw InvalidArgument("relaxation must lie in (0, 2)");
}

SolveResult FeasibilitySolver::solve(const Blocks& target) const {
  const auto start = std::chrono::steady_clock::now();
  check_target(*problem_.map, target);
  ConicProblem problem = problem_;
  problem.target = target;
  const auto& map = *scaled_map_;
  const auto sizes = map.domain_sizes();
  const double gamma = options_.relaxation;

  SolveResult result;
  Blocks z = zeros_like(sizes);
  Blocks xc;
  double eq = 0.0;
  long it = 0;
  for (it = 1; it <= options_.max_iter; ++it) {
    xc = project_psd(z, options_.jobs);
    Blocks r = map.apply(xc);
    axpy(-1.0, target, r);
    eq = norm(r);
    if (eq <= options_.eps_eq) {
      result.status = SolveStatus::feasible;
      break;
    }
    Blocks reflected = xc;
    for (std::size_t i = 0; i < z.size(); ++i) reflected[i] = 2.0 * xc[i] - z[i];
    const Blocks xa = projector_.project(reflected, target);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += gamma * (xa[i] - xc[i]);

    if (it % options_.certificate_interval == 0) {
      Blocks gap = xc;
      axpy(-1.0, xa, gap);
      auto cert = infeasibility_certificate(problem, projector_, gap, options_);
      if (cert) {
        result.status = SolveStatus::infeasible_certified;
        result.certificate = std::move(cert);
        break;
      }
    }
  }
  result.iterations = std::min(it, options_.max_iter);
  result.blocks = std::move(xc);
  if (!problem_.block_weights.empty())
    for (std::size_t i = 0; i < result.blocks.size(); ++i) result.blocks[i] /= problem_.block_weights[i];
  result.residuals.eq = eq;
  result.residuals.cone = std::min(0.0, min_eigenvalue(result.blocks, options_.jobs));
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SolveResult solve_feasibility(const ConicProblem& problem, const SolverOptions& options) {
  return FeasibilitySolver(problem, options).solve(problem.target);
}

double boundary_from_c(double c, int d) {
  if (d < 2) throw InvalidArgument("boundary_from_c: d must be at least 2");
  if (!(c >= 0.0 && c <= 1.0)) throw InvalidArgument("boundary_from_c: c must lie in [0, 1]");
  return c * d / (c + d - 1.0);
}

InterpolationResult maximize_interpolation(const ConicProblem& shape, const Blocks& target0, const Blocks& target1,
                                           double eps_c, const SolverOptions& options) {
  if (!(eps_c > 0.0)) throw InvalidArgument("eps_c must be positive");
  const FeasibilitySolver solver(shape, options);
  InterpolationResult out;

  auto probe = [&](double c) {
    Blocks target = target0;
    for (std::size_t i = 0; i < target.size(); ++i) target[i] = (1.0 - c) * target0[i] + c * target1[i];
    SolveResult r = solver.solve(target);
    out.probes.push_back({c, r.status, r.iterations, r.residuals.eq, r.wall_time});
    if (r.status == SolveStatus::not_converged) out.not_converged_probe = true;
    if (r.status == SolveStatus::feasible && c >= out.lower) out.best = r;
    return r.status == SolveStatus::feasible;
  };

  double lo = 0.0;
  double hi = 1.0;
  if (!probe(0.0)) {
    out.lower = out.upper = out.c_star = 0.0;
    return out;
  }
  if (probe(1.0)) {
    out.lower = out.upper = out.c_star = 1.0;
    return out;
  }
  while (hi - lo >= eps_c) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid)) {
      lo = mid;
      out.lower = lo;
    } else {
      hi = mid;
    }
  }
  for (const auto& feasible : out.probes) {
    if (feasible.status != SolveStatus::feasible) continue;
    for (const auto& refuted : out.probes)
      if (refuted.status == SolveStatus::infeasible_certified && refuted.c <= feasible.c)
        throw InternalError("bisection found a feasible probe above a certified infeasible one");
  }
  out.lower = lo;
  out.upper = hi;
  out.c_star = 0.5 * (lo + hi);
  return out;
}

}  // namespace symext
