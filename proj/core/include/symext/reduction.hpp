#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "symext/gt.hpp"
#include "symext/partitions.hpp"
#include "symext/sdp.hpp"
#include "symext/states.hpp"

namespace symext {

struct CompileOptions {
  /// Upper bound on sum over blocks of (d_A * D)^2 complex entries.
  double cap = 2.0e7;
  int jobs = 1;
};

/// Search-space bookkeeping: naive d_A^2 d^(2k) real parameters against
/// d_A^2 sum D^2 for the block-diagonal form.
struct ParameterReport {
  int d = 0;
  int d_A = 0;
  int k = 0;
  BigInt naive_dim;
  BigInt search_dim;
  std::vector<Partition> shapes;
  std::vector<BigInt> irrep_dims;     ///< D for each block
  std::vector<BigInt> multiplicities; ///< m for each block
  std::vector<BigInt> block_sizes;    ///< d_A * D for each block
};

ParameterReport parameter_report(const IrrepCatalog& catalog, int d_A);

/// Block-diagonal form of the k-extension problem for A (dim d_A) and
/// k copies of B (dim d).
///
/// One Hermitian variable X per Young diagram, of size d_A * D, indexed by
/// (a, w) -> a * D + w. The marginal on A B_1 is
///   Phi(X)[(m,i),(n,j)] = sum (m_lambda / k) Tr(X_mn T_ji),
/// X_mn the D x D sub-block at A-indices (m, n).
class ReducedProblem {
 public:
  struct Entry {
    Eigen::Index row;
    Eigen::Index col;
    std::complex<double> value;
  };

  ReducedProblem(int d, int d_A, int k, IrrepCatalog catalog, std::vector<IrrepGenerators> irreps);

  int d() const { return d_; }
  int d_A() const { return d_A_; }
  int k() const { return k_; }
  const IrrepCatalog& catalog() const { return catalog_; }
  const std::vector<IrrepGenerators>& irreps() const { return irreps_; }
  std::size_t block_count() const { return irreps_.size(); }
  std::vector<Eigen::Index> block_sizes() const;
  /// m_lambda / k for block i.
  double coefficient(std::size_t block) const { return coefficients_[block]; }
  /// m_lambda for block i, as a double.
  double multiplicity(std::size_t block) const { return multiplicities_[block]; }

  /// Marginal on [d_A, d]. Blocks need not be normalised, so the result is
  /// a plain Hermitian matrix with trace sum m Tr X.
  Eigen::MatrixXcd apply_marginal(const Blocks& blocks) const;
  /// Adjoint with respect to the real Frobenius inner products.
  Blocks adjoint_marginal(const Eigen::MatrixXcd& y) const;

 private:
  void check_blocks(const Blocks& blocks) const;

  int d_;
  int d_A_;
  int k_;
  IrrepCatalog catalog_;
  std::vector<IrrepGenerators> irreps_;
  std::vector<double> coefficients_;
  std::vector<double> multiplicities_;
  // nonzeros_[block][a * d + b] lists the nonzero entries of T_ab.
  std::vector<std::vector<std::vector<Entry>>> nonzeros_;
};

/// Throws TooLarge if the blocks exceed options.cap.
ReducedProblem compile(int d, int d_A, int k, const CompileOptions& options = {});

ParameterReport parameter_report(const ReducedProblem& problem);

/// The reduced marginal map as a LinearMap (one codomain block of size d_A d).
class MarginalMap final : public LinearMap {
 public:
  explicit MarginalMap(std::shared_ptr<const ReducedProblem> problem) : problem_(std::move(problem)) {}
  std::vector<Eigen::Index> domain_sizes() const override { return problem_->block_sizes(); }
  std::vector<Eigen::Index> codomain_sizes() const override {
    return {static_cast<Eigen::Index>(problem_->d_A()) * problem_->d()};
  }
  Blocks apply(const Blocks& x) const override { return {problem_->apply_marginal(x)}; }
  Blocks adjoint(const Blocks& y) const override { return problem_->adjoint_marginal(y.at(0)); }
  const ReducedProblem& problem() const { return *problem_; }

 private:
  std::shared_ptr<const ReducedProblem> problem_;
};

/// Feasibility problem "blocks >= 0 with marginal equal to target". Blocks
/// are weighted by m_lambda for the solver and labelled by their diagram.
ConicProblem extension_problem(std::shared_ptr<const ReducedProblem> problem, const Eigen::MatrixXcd& target);
ConicProblem extension_problem(std::shared_ptr<const ReducedProblem> problem, const DensityMatrix& target);

/// Debug dump: catalog, GT bases, generator nonzeros and (optionally) target.
void write_problem_json(std::ostream& os, const ReducedProblem& problem, const DensityMatrix* target = nullptr);

/// Diagnostic dump of one irrep: basis patterns, then every T_ab as a
/// row-major array of [re, im] pairs.
void write_generators_json(std::ostream& os, const IrrepGenerators& irrep);

}  // namespace symext
