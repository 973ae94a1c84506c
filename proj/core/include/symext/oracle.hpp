#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "symext/gt.hpp"
#include "symext/reduction.hpp"
#include "symext/sdp.hpp"
#include "symext/states.hpp"

namespace symext {

/// Full tensor-space ground truth at desk scale.
namespace oracle {

/// Default caps: d^k for B-space objects, d_A d^k for full-space ones.
inline constexpr Eigen::Index kDefaultTensorCap = 243;
inline constexpr Eigen::Index kDefaultFullCap = 243 * 3;

/// P(perm) on (C^d)^(x)k: the factor at site s moves to site perm[s].
/// Sites are 0-based; site 0 is the most significant digit.
/// P(p1) P(p2) = P(p1 o p2).
struct PermutationOperator {
  int d = 0;
  int k = 0;
  std::vector<int> perm;
  Eigen::MatrixXcd matrix;
};

PermutationOperator permutation_operator(int d, int k, std::vector<int> perm, Eigen::Index cap = kDefaultTensorCap);

/// Transposition of sites s and t as a permutation vector.
std::vector<int> transposition(int k, int s, int t);

/// Collective generator sum_sites |a><b| on (C^d)^(x)k.
Eigen::MatrixXcd collective_generator(int d, int k, int a, int b, Eigen::Index cap = kDefaultTensorCap);

/// Orthonormal columns spanning one irreducible copy, ordered like the GT
/// basis of `shape`, so that V^H T_ab V equals the irrep matrix of T_ab.
struct SubspaceIsometry {
  Partition shape;
  int copy = 0;
  Eigen::MatrixXcd columns;
};

/// The m_lambda copies of `irrep` inside (C^d)^(x)k.
///
/// Each copy is seeded with an orthonormal highest-weight vector (common
/// kernel of the collective raising operators inside the top weight
/// space); the rest of the copy is generated by collective lowering
/// operators, orthonormalised weight space by weight space in irrep
/// coordinates. Throws InternalError on rank deficiency.
std::vector<SubspaceIsometry> build_isometries(const IrrepGenerators& irrep, int k,
                                               Eigen::Index cap = kDefaultTensorCap);
std::vector<SubspaceIsometry> build_isometries(const Partition& shape, int d, int k,
                                               Eigen::Index cap = kDefaultTensorCap);

/// Isometries for every block of a compiled problem, in block order.
std::vector<std::vector<SubspaceIsometry>> schur_basis(const ReducedProblem& problem,
                                                       Eigen::Index cap = kDefaultTensorCap);

/// sum over blocks and copies of (I_A (x) V) X (I_A (x) V)^H.
Eigen::MatrixXcd embed_blocks(const Blocks& blocks, const std::vector<std::vector<SubspaceIsometry>>& basis, int d_A,
                              Eigen::Index cap = kDefaultFullCap);

/// Constraint map of the unreduced problem on A (x) B^(x)k:
///   X -> [Tr_{B_2..B_k} X, Q_1 X Q_1 - X, ..., Q_{k-1} X Q_{k-1} - X]
/// with Q_s = I_A (x) (swap of B_s and B_{s+1}).
class NaiveExtensionMap final : public LinearMap {
 public:
  NaiveExtensionMap(int d_A, int d, int k, Eigen::Index cap = kDefaultFullCap);
  std::vector<Eigen::Index> domain_sizes() const override { return {full_}; }
  std::vector<Eigen::Index> codomain_sizes() const override;
  Blocks apply(const Blocks& x) const override;
  Blocks adjoint(const Blocks& y) const override;

  /// Tr_{B_2..B_k} of a full-space operator.
  Eigen::MatrixXcd marginal(const Eigen::MatrixXcd& x) const;
  /// Largest |Q_s X Q_s - X| entry over adjacent swaps.
  double symmetry_residual(const Eigen::MatrixXcd& x) const;

 private:
  int d_A_;
  int d_;
  int k_;
  Eigen::Index full_;
  std::vector<int> dims_;
  std::vector<std::vector<Eigen::Index>> swaps_;
};

/// The unreduced k-extension feasibility problem for rho_AB.
ConicProblem naive_extension_sdp(const DensityMatrix& rho_ab, int k, Eigen::Index cap = kDefaultFullCap);

/// Full-space checks of an extension candidate.
struct ExtensionCheck {
  double min_eigenvalue = 0.0;
  double marginal_error = 0.0;   ///< max entry of |Tr_{rest} X - rho_AB|
  double symmetry_error = 0.0;   ///< max entry of |P X P - X| over adjacent swaps
};
ExtensionCheck check_extension(const Eigen::MatrixXcd& full, const DensityMatrix& rho_ab, int k);

/// Reference vectors and coefficient tables for two and three qutrits.
namespace fixtures {

/// Basis ket |digits> on (C^d)^(x)len.
Eigen::VectorXcd ket(const std::string& digits, int d);

/// {|00>, |11>, |22>, (|01>+|10>)/r2, (|02>+|20>)/r2, (|12>+|21>)/r2}.
std::vector<Eigen::VectorXcd> two_qutrit_symmetric();
/// {(|01>-|10>)/r2, (|02>-|20>)/r2, (|12>-|21>)/r2}.
std::vector<Eigen::VectorXcd> two_qutrit_antisymmetric();
/// The two lists spanning the [2,1] copies for three qutrits.
std::vector<Eigen::VectorXcd> three_qutrit_mixed_first();
std::vector<Eigen::VectorXcd> three_qutrit_mixed_second();

/// Coefficient of p_{alpha,beta} rho_A^{(alpha,beta)} in M_ab, where
/// M_ab is the (a,b) entry of 2 Tr_{B_2} applied to |phi_beta><phi_alpha|.
/// alpha and beta are 1-based.
struct CoefficientTerm {
  int a;
  int b;
  int alpha;
  int beta;
  double value;
};
std::vector<CoefficientTerm> two_qutrit_symmetric_coefficients();
std::vector<CoefficientTerm> two_qutrit_antisymmetric_coefficients();

}  // namespace fixtures
}  // namespace oracle
}  // namespace symext
