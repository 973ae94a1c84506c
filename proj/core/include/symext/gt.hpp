#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "symext/partitions.hpp"

namespace symext {

/// Gelfand-Tsetlin pattern for u(d).
///
/// `row(l)` for l = 1..d holds the l entries of level l; level d is the
/// highest weight. Adjacent levels interlace:
///   row(l)[i] >= row(l-1)[i] >= row(l)[i+1].
class GTPattern {
 public:
  GTPattern() = default;
  /// `levels[l-1]` is level l. Throws InvalidArgument if the triangle is
  /// malformed or does not interlace.
  explicit GTPattern(std::vector<std::vector<int>> levels);

  int d() const { return static_cast<int>(levels_.size()); }
  const std::vector<int>& row(int level) const { return levels_[static_cast<std::size_t>(level - 1)]; }
  int entry(int i, int level) const { return levels_[static_cast<std::size_t>(level - 1)][static_cast<std::size_t>(i - 1)]; }
  int& entry(int i, int level) { return levels_[static_cast<std::size_t>(level - 1)][static_cast<std::size_t>(i - 1)]; }

  /// Entries from the top level down, each level left to right.
  std::vector<int> flattened() const;

  friend bool operator==(const GTPattern&, const GTPattern&) = default;

 private:
  std::vector<std::vector<int>> levels_;
};

/// All patterns with top row `shape` padded to d, in descending
/// lexicographic order of `flattened()`; the highest-weight pattern is first.
std::vector<GTPattern> enumerate_gt_patterns(const Partition& shape, int d);

/// Weight: component l-1 is (sum of level l) - (sum of level l-1).
std::vector<int> pattern_weight(const GTPattern& pattern);

/// Matrices of the u(d) basis T_ab (|a><b| on one site) in the GT basis of
/// one irrep.
///
/// Simple raising/lowering matrices come from the Gelfand-Tsetlin formulas
/// with non-negative square roots; longer-range generators are nested
/// commutators T_ab = [T_ac, T_cb] with c the neighbour of b towards a.
class IrrepGenerators {
 public:
  IrrepGenerators(Partition shape, int d);

  const Partition& shape() const { return shape_; }
  int d() const { return d_; }
  Eigen::Index dimension() const { return static_cast<Eigen::Index>(basis_.size()); }
  const std::vector<GTPattern>& basis() const { return basis_; }

  /// Matrix of T_ab; row index is the bra pattern.
  const Eigen::MatrixXcd& generator(int a, int b) const {
    return matrices_[static_cast<std::size_t>(a * d_ + b)];
  }

  /// Position of `pattern` in the basis, or -1.
  Eigen::Index index_of(const GTPattern& pattern) const;

 private:
  Partition shape_;
  int d_;
  std::vector<GTPattern> basis_;
  std::vector<Eigen::MatrixXcd> matrices_;
};

/// Matrix of T_ab for a finished irrep; equivalent to g.generator(a, b) with
/// bounds checking.
Eigen::MatrixXcd generator_matrix(const IrrepGenerators& g, int a, int b);

/// Largest entry of [T_ab, T_cd] - delta_bc T_ad + delta_da T_cb over all
/// index quadruples.
double commutation_residual(const IrrepGenerators& g);

/// Largest deviation of the quadratic Casimir sum_ab T_ab T_ba from a multiple
/// of the identity.
double casimir_residual(const IrrepGenerators& g);

}  // namespace symext
