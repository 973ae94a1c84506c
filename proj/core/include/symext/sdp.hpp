#pragma once

#include <chrono>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace symext {

/// Tuple of complex square matrices; both the variable and constraint spaces
/// of a conic problem are tuples of Hermitian blocks.
using Blocks = std::vector<Eigen::MatrixXcd>;

/// Real inner product Re sum_i Tr(A_i^H B_i).
double inner(const Blocks& a, const Blocks& b);
double norm(const Blocks& a);
Blocks zeros_like(const std::vector<Eigen::Index>& sizes);
void axpy(double alpha, const Blocks& x, Blocks& y);

/// Real-linear map between tuples of Hermitian blocks.
class LinearMap {
 public:
  virtual ~LinearMap() = default;
  virtual std::vector<Eigen::Index> domain_sizes() const = 0;
  virtual std::vector<Eigen::Index> codomain_sizes() const = 0;
  virtual Blocks apply(const Blocks& x) const = 0;
  virtual Blocks adjoint(const Blocks& y) const = 0;
};

/// Orthonormal real coordinates of a Hermitian matrix: the diagonal, then
/// sqrt(2) Re and sqrt(2) Im of each upper entry, row by row.
Eigen::VectorXd hermitian_coordinates(const Eigen::MatrixXcd& h);
Eigen::MatrixXcd hermitian_from_coordinates(const Eigen::VectorXd& v, Eigen::Index n);
Eigen::VectorXd coordinates(const Blocks& blocks);
Blocks from_coordinates(const Eigen::VectorXd& v, const std::vector<Eigen::Index>& sizes);

/// Largest |<A x, y> - <x, A^H y>| over `probes` random Hermitian pairs,
/// relative to |x||y|.
double adjoint_mismatch(const LinearMap& map, int probes, unsigned seed);

/// find X >= 0 (blockwise) with map(X) = target.
struct ConicProblem {
  std::shared_ptr<const LinearMap> map;
  Blocks target;
  /// Optional linear objective <C, X>; the feasibility solver ignores it.
  std::optional<Blocks> objective;
  /// Constraint-space element E with map^H(E) positive definite, used to
  /// repair near-certificates. The reduced and naive problems both use the
  /// identity on the marginal.
  std::optional<Blocks> positive_direction;
  /// Per-block positive weights; the solver works in scaled variables
  /// w_i X_i. Empty means all ones.
  std::vector<double> block_weights;
  /// Human-readable names, one per variable block (used by the exporter).
  std::vector<std::string> block_labels;

  std::vector<Eigen::Index> block_sizes() const { return map->domain_sizes(); }
};

enum class SolveStatus { feasible, infeasible_certified, not_converged };
std::string to_string(SolveStatus status);

struct Residuals {
  /// Frobenius norm of map(X) - target.
  double eq = 0.0;
  /// Most negative eigenvalue over all blocks of X (zero if X >= 0).
  double cone = 0.0;
};

/// Farkas witness: Y with <target, Y> < 0 and map^H(Y) >= 0, |Y| = 1.
struct Certificate {
  Blocks dual;
  double target_value = 0.0;
  double min_eigenvalue = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::not_converged;
  Blocks blocks;
  Residuals residuals;
  long iterations = 0;
  double wall_time = 0.0;
  std::optional<Certificate> certificate;
};

struct SolverOptions {
  double eps_eq = 1e-7;
  double eps_psd = 1e-8;
  long max_iter = 200000;
  /// Iterations between attempts to extract an infeasibility certificate.
  long certificate_interval = 25;
  /// Relaxation of the reflection step, in (0, 2).
  double relaxation = 1.0;
  int jobs = 1;
};

/// Projection onto {X : map(X) = b} using a factorised normal-equations
/// operator; the factorisation depends only on the map and is reused for
/// any number of right-hand sides.
class AffineProjector {
 public:
  explicit AffineProjector(std::shared_ptr<const LinearMap> map);

  /// Minimum-norm Y with map(map^H(Y)) = r (pseudo-inverse on the range).
  Blocks solve_normal(const Blocks& r) const;
  /// X - map^H((map map^H)^+ (map(X) - b)).
  Blocks project(const Blocks& x, const Blocks& b) const;
  const LinearMap& map() const { return *map_; }
  /// Rank of map map^H.
  Eigen::Index rank() const { return rank_; }

 private:
  std::shared_ptr<const LinearMap> map_;
  std::vector<Eigen::Index> codomain_;
  Eigen::MatrixXd eigenvectors_;
  Eigen::VectorXd inverse_eigenvalues_;
  Eigen::Index rank_ = 0;
};

/// Blockwise projection onto the PSD cone: clip negative eigenvalues.
Blocks project_psd(const Blocks& x, int jobs = 1);
/// Smallest eigenvalue over all blocks of the Hermitian parts.
double min_eigenvalue(const Blocks& x, int jobs = 1);

/// Feasibility solver for one fixed map and weights. Alternating projections
/// accelerated by reflection (Douglas-Rachford): the affine projector is
/// built once, so repeated solves with different targets are cheap.
class FeasibilitySolver {
 public:
  FeasibilitySolver(const ConicProblem& shape, SolverOptions options);
  SolveResult solve(const Blocks& target) const;
  const SolverOptions& options() const { return options_; }

 private:
  ConicProblem problem_;
  SolverOptions options_;
  std::shared_ptr<const LinearMap> scaled_map_;
  AffineProjector projector_;
};

SolveResult solve_feasibility(const ConicProblem& problem, const SolverOptions& options = {});

/// Try to turn `direction` (an approximate map^H(Y) separating the cone from
/// the affine set) into a verified Farkas certificate. Returned only if
/// <target, Y> <= -10 eps_eq and map^H(Y) >= 10 eps_psd with |Y| = 1.
std::optional<Certificate> infeasibility_certificate(const ConicProblem& problem, const AffineProjector& projector,
                                                     const Blocks& direction, const SolverOptions& options);

/// Independent recheck of a certificate by eigendecomposition.
bool verify_certificate(const ConicProblem& problem, const Certificate& certificate, double margin = 0.0);

/// alpha = c d / (c + d - 1).
double boundary_from_c(double c, int d);

struct Probe {
  double c = 0.0;
  SolveStatus status = SolveStatus::not_converged;
  long iterations = 0;
  double eq_residual = 0.0;
  double wall_time = 0.0;
};

struct InterpolationResult {
  double c_star = 0.0;
  double lower = 0.0;  ///< largest c proven feasible
  double upper = 1.0;  ///< smallest c treated as infeasible
  std::vector<Probe> probes;
  /// Some probe hit max_iter and was treated as infeasible.
  bool not_converged_probe = false;
  SolveResult best;  ///< solution at `lower`
};

/// Bisection for the largest c in [0, 1] with (1 - c) target0 + c target1
/// feasible. c = 0 must be feasible; not-converged probes count as
/// infeasible. Throws InternalError if a feasible probe lies above an
/// infeasible-certified one.
InterpolationResult maximize_interpolation(const ConicProblem& shape, const Blocks& target0, const Blocks& target1,
                                           double eps_c, const SolverOptions& options = {});

}  // namespace symext
