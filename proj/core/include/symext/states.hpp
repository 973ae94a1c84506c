#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace symext {

/// Dense density matrix on a tensor product of factors.
///
/// Row-major factor order: the first factor is the most significant digit of
/// the basis index. Construction checks Hermiticity and unit trace to 1e-12;
/// positivity is checked on demand by validate().
class DensityMatrix {
 public:
  static constexpr double kConstructionTolerance = 1e-12;

  DensityMatrix(std::vector<int> dims, Eigen::MatrixXcd data);

  const std::vector<int>& dims() const { return dims_; }
  const Eigen::MatrixXcd& data() const { return data_; }
  Eigen::Index dimension() const { return data_.rows(); }

 private:
  std::vector<int> dims_;
  Eigen::MatrixXcd data_;
};

struct ValidationReport {
  bool hermitian = false;
  double trace_deviation = 0.0;
  double min_eigenvalue = 0.0;
};

/// Hermiticity is judged at `tolerance`; min_eigenvalue is computed from the
/// Hermitian part.
ValidationReport validate(const Eigen::MatrixXcd& matrix, double tolerance = DensityMatrix::kConstructionTolerance);
ValidationReport validate(const DensityMatrix& rho, double tolerance = DensityMatrix::kConstructionTolerance);

/// Werner state (I - alpha * SWAP) / (d^2 - d alpha), alpha in [-1, 1].
DensityMatrix werner(int d, double alpha);

DensityMatrix maximally_mixed(std::vector<int> dims);

/// Tensor product of factors, in argument order.
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

/// Operator that exchanges the two factors of C^d (x) C^d.
Eigen::MatrixXcd swap_operator(int d);

/// Partial trace of an arbitrary square operator over the factors not in
/// `keep`. The kept factors stay in their original order.
Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& matrix, const std::vector<int>& dims,
                               const std::vector<int>& keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

/// Density-matrix JSON: {"dims":[...],"data":[[re,im],...]}, data row-major
/// over the full matrix.
void write_json(std::ostream& os, const DensityMatrix& rho);
DensityMatrix read_json(std::istream& is);

/// Product of dims, throwing InvalidArgument on a non-positive factor.
Eigen::Index total_dimension(const std::vector<int>& dims);

}  // namespace symext
