#include "symext/states.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "symext/error.hpp"

namespace symext {

Eigen::Index total_dimension(const std::vector<int>& dims) {
  if (dims.empty()) throw InvalidArgument("dims must be nonempty");
  Eigen::Index n = 1;
  for (int d : dims) {
    if (d < 1) throw InvalidArgument("tensor factor dimensions must be positive");
    n *= d;
  }
  return n;
}

DensityMatrix::DensityMatrix(std::vector<int> dims, Eigen::MatrixXcd data) : dims_(std::move(dims)), data_(std::move(data)) {
  const Eigen::Index n = total_dimension(dims_);
  if (data_.rows() != n || data_.cols() != n)
    throw InvalidArgument("density matrix size " + std::to_string(data_.rows()) + "x" + std::to_string(data_.cols()) +
                          " does not match dims product " + std::to_string(n));
  const double asym = (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kConstructionTolerance) throw InvalidArgument("density matrix is not Hermitian");
  if (std::abs(data_.trace() - 1.0) > kConstructionTolerance) throw InvalidArgument("density matrix trace is not 1");
}

ValidationReport validate(const Eigen::MatrixXcd& matrix, double tolerance) {
  if (matrix.rows() != matrix.cols()) throw InvalidArgument("validate: matrix must be square");
  ValidationReport report;
  report.hermitian = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
  report.trace_deviation = std::abs(matrix.trace() - 1.0);
  const Eigen::MatrixXcd herm = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = eig.eigenvalues().minCoeff();
  return report;
}

ValidationReport validate(const DensityMatrix& rho, double tolerance) { return validate(rho.data(), tolerance); }

Eigen::MatrixXcd swap_operator(int d) {
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  Eigen::MatrixXcd swap = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) swap(j * d + i, i * d + j) = 1.0;
  return swap;
}

DensityMatrix werner(int d, double alpha) {
  if (d < 2) throw InvalidArgument("werner: d must be at least 2");
  if (!(alpha >= -1.0 && alpha <= 1.0)) throw InvalidArgument("werner: alpha must lie in [-1, 1]");
  const double norm = static_cast<double>(d) * d - d * alpha;
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  Eigen::MatrixXcd data = (Eigen::MatrixXcd::Identity(n, n) - alpha * swap_operator(d)) / norm;
  return DensityMatrix({d, d}, std::move(data));
}

DensityMatrix maximally_mixed(std::vector<int> dims) {
  const Eigen::Index n = total_dimension(dims);
  return DensityMatrix(std::move(dims), Eigen::MatrixXcd::Identity(n, n) / static_cast<double>(n));
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  const Eigen::Index na = a.dimension();
  const Eigen::Index nb = b.dimension();
  Eigen::MatrixXcd out(na * nb, na * nb);
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index j = 0; j < na; ++j) out.block(i * nb, j * nb, nb, nb) = a.data()(i, j) * b.data();
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  // Products of unit-trace Hermitian matrices can drift by a few ulps.
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(std::move(dims), std::move(out));
}

Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& matrix, const std::vector<int>& dims, const std::vector<int>& keep) {
  const Eigen::Index n = total_dimension(dims);
  if (matrix.rows() != n || matrix.cols() != n) throw InvalidArgument("partial_trace: matrix does not match dims");
  if (keep.empty()) throw InvalidArgument("partial_trace: keep must be nonempty");
  const int factors = static_cast<int>(dims.size());
  std::vector<bool> kept(dims.size(), false);
  for (int f : keep) {
    if (f < 0 || f >= factors) throw InvalidArgument("partial_trace: factor index out of range");
    if (kept[static_cast<std::size_t>(f)]) throw InvalidArgument("partial_trace: duplicate factor index");
    kept[static_cast<std::size_t>(f)] = true;
  }
  std::vector<Eigen::Index> stride(dims.size());
  Eigen::Index s = 1;
  for (int f = factors - 1; f >= 0; --f) {
    stride[static_cast<std::size_t>(f)] = s;
    s *= dims[static_cast<std::size_t>(f)];
  }
  // Offsets in the full index for every assignment of a factor subset,
  // enumerated row-major over the subset in the given order.
  auto offsets = [&](const std::vector<int>& subset) {
    std::vector<Eigen::Index> out{0};
    for (int f : subset) {
      std::vector<Eigen::Index> next;
      next.reserve(out.size() * static_cast<std::size_t>(dims[static_cast<std::size_t>(f)]));
      for (Eigen::Index base : out)
        for (int digit = 0; digit < dims[static_cast<std::size_t>(f)]; ++digit)
          next.push_back(base + digit * stride[static_cast<std::size_t>(f)]);
      out = std::move(next);
    }
    return out;
  };
  std::vector<int> traced;
  for (int f = 0; f < factors; ++f)
    if (!kept[static_cast<std::size_t>(f)]) traced.push_back(f);
  const auto kept_offsets = offsets(keep);
  const auto traced_offsets = offsets(traced);
  const auto m = static_cast<Eigen::Index>(kept_offsets.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m, m);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c) {
      std::complex<double> acc = 0.0;
      for (Eigen::Index t : traced_offsets)
        acc += matrix(kept_offsets[static_cast<std::size_t>(r)] + t, kept_offsets[static_cast<std::size_t>(c)] + t);
      out(r, c) = acc;
    }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  Eigen::MatrixXcd reduced = partial_trace(rho.data(), rho.dims(), keep);
  reduced = 0.5 * (reduced + reduced.adjoint()).eval();
  std::vector<int> dims;
  for (int f : keep) dims.push_back(rho.dims()[static_cast<std::size_t>(f)]);
  return DensityMatrix(std::move(dims), std::move(reduced));
}

void write_json(std::ostream& os, const DensityMatrix& rho) {
  nlohmann::json j;
  j["dims"] = rho.dims();
  nlohmann::json data = nlohmann::json::array();
  const auto& m = rho.data();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back({m(r, c).real(), m(r, c).imag()});
  j["data"] = std::move(data);
  os << j.dump() << '\n';
}

DensityMatrix read_json(std::istream& is) {
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("density matrix JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dims") || !j.contains("data"))
    throw InvalidArgument("density matrix JSON: expected an object with \"dims\" and \"data\"");
  if (!j["dims"].is_array() || !j["data"].is_array())
    throw InvalidArgument("density matrix JSON: \"dims\" and \"data\" must be arrays");
  std::vector<int> dims;
  for (const auto& d : j["dims"]) {
    if (!d.is_number_integer()) throw InvalidArgument("density matrix JSON: dims must be integers");
    dims.push_back(d.get<int>());
  }
  const Eigen::Index n = total_dimension(dims);
  const auto& data = j["data"];
  if (static_cast<Eigen::Index>(data.size()) != n * n)
    throw InvalidArgument("density matrix JSON: data has " + std::to_string(data.size()) + " entries, expected " +
                          std::to_string(n * n));
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto& entry = data[static_cast<std::size_t>(r * n + c)];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number())
        throw InvalidArgument("density matrix JSON: entries must be [re, im] pairs");
      m(r, c) = {entry[0].get<double>(), entry[1].get<double>()};
    }
  return DensityMatrix(std::move(dims), std::move(m));
}

}  // namespace symext
