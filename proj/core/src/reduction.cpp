#include "symext/reduction.hpp"

#include <cmath>
#include <optional>
#include <ostream>

#include "json.hpp"
#include "symext/error.hpp"
#include "symext/parallel.hpp"

namespace symext {

ParameterReport parameter_report(const IrrepCatalog& catalog, int d_A) {
  if (d_A < 1) throw InvalidArgument("d_A must be positive");
  ParameterReport report;
  report.d = catalog.d;
  report.d_A = d_A;
  report.k = catalog.k;
  const BigInt da2 = BigInt(d_A) * d_A;
  report.naive_dim = da2 * power(static_cast<unsigned>(catalog.d), 2u * static_cast<unsigned>(catalog.k));
  report.search_dim = da2 * catalog.search_dimension();
  for (const auto& e : catalog.entries) {
    report.shapes.push_back(e.shape);
    report.irrep_dims.push_back(e.dimension);
    report.multiplicities.push_back(e.multiplicity);
    report.block_sizes.push_back(e.dimension * d_A);
  }
  return report;
}

ReducedProblem::ReducedProblem(int d, int d_A, int k, IrrepCatalog catalog, std::vector<IrrepGenerators> irreps)
    : d_(d), d_A_(d_A), k_(k), catalog_(std::move(catalog)), irreps_(std::move(irreps)) {
  if (irreps_.size() != catalog_.entries.size()) throw InvalidArgument("one irrep per catalog entry required");
  for (std::size_t b = 0; b < irreps_.size(); ++b) {
    const double m = catalog_.entries[b].multiplicity.convert_to<double>();
    multiplicities_.push_back(m);
    coefficients_.push_back(m / k_);
    std::vector<std::vector<Entry>> per_generator(static_cast<std::size_t>(d_ * d_));
    for (int a = 0; a < d_; ++a)
      for (int c = 0; c < d_; ++c) {
        const auto& t = irreps_[b].generator(a, c);
        auto& list = per_generator[static_cast<std::size_t>(a * d_ + c)];
        for (Eigen::Index col = 0; col < t.cols(); ++col)
          for (Eigen::Index row = 0; row < t.rows(); ++row)
            if (std::abs(t(row, col)) > 1e-14) list.push_back({row, col, t(row, col)});
      }
    nonzeros_.push_back(std::move(per_generator));
  }
}

std::vector<Eigen::Index> ReducedProblem::block_sizes() const {
  std::vector<Eigen::Index> out;
  for (const auto& irrep : irreps_) out.push_back(d_A_ * irrep.dimension());
  return out;
}

void ReducedProblem::check_blocks(const Blocks& blocks) const {
  if (blocks.size() != irreps_.size())
    throw InvalidArgument("expected " + std::to_string(irreps_.size()) + " blocks, got " + std::to_string(blocks.size()));
  const auto sizes = block_sizes();
  for (std::size_t b = 0; b < blocks.size(); ++b)
    if (blocks[b].rows() != sizes[b] || blocks[b].cols() != sizes[b])
      throw InvalidArgument("block " + std::to_string(b) + " has the wrong shape");
}

Eigen::MatrixXcd ReducedProblem::apply_marginal(const Blocks& blocks) const {
  check_blocks(blocks);
  const Eigen::Index n = static_cast<Eigen::Index>(d_A_) * d_;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Eigen::Index dim = irreps_[b].dimension();
    const auto& x = blocks[b];
    for (int m = 0; m < d_A_; ++m)
      for (int nn = 0; nn < d_A_; ++nn) {
        const auto xmn = x.block(m * dim, nn * dim, dim, dim);
        for (int i = 0; i < d_; ++i)
          for (int j = 0; j < d_; ++j) {
            // Tr(X_mn T_ji) = sum over nonzeros T_ji[r, c] X_mn[c, r].
            std::complex<double> acc = 0.0;
            for (const auto& e : nonzeros_[b][static_cast<std::size_t>(j * d_ + i)]) acc += e.value * xmn(e.col, e.row);
            out(m * d_ + i, nn * d_ + j) += coefficients_[b] * acc;
          }
      }
  }
  return out;
}

Blocks ReducedProblem::adjoint_marginal(const Eigen::MatrixXcd& y) const {
  const Eigen::Index n = static_cast<Eigen::Index>(d_A_) * d_;
  if (y.rows() != n || y.cols() != n) throw InvalidArgument("adjoint_marginal: expected a d_A*d square matrix");
  Blocks out;
  for (std::size_t b = 0; b < irreps_.size(); ++b) {
    const Eigen::Index dim = irreps_[b].dimension();
    Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(d_A_ * dim, d_A_ * dim);
    for (int m = 0; m < d_A_; ++m)
      for (int nn = 0; nn < d_A_; ++nn) {
        auto zmn = z.block(m * dim, nn * dim, dim, dim);
        // Z_mn = c sum_ij Y[(m,i),(n,j)] T_ij.
        for (int i = 0; i < d_; ++i)
          for (int j = 0; j < d_; ++j) {
            const std::complex<double> coeff = coefficients_[b] * y(m * d_ + i, nn * d_ + j);
            if (coeff == 0.0) continue;
            for (const auto& e : nonzeros_[b][static_cast<std::size_t>(i * d_ + j)]) zmn(e.row, e.col) += coeff * e.value;
          }
      }
    out.push_back(std::move(z));
  }
  return out;
}

ReducedProblem compile(int d, int d_A, int k, const CompileOptions& options) {
  if (d < 2) throw InvalidArgument("compile: d must be at least 2");
  if (d_A < 1) throw InvalidArgument("compile: d_A must be positive");
  if (k < 1) throw InvalidArgument("compile: k must be positive");
  IrrepCatalog cat = catalog(k, d);
  BigInt entries = 0;
  for (const auto& e : cat.entries) entries += (e.dimension * d_A) * (e.dimension * d_A);
  if (entries.convert_to<double>() > options.cap)
    throw TooLarge("reduced problem needs " + entries.str() + " block entries, above the cap of " +
                   std::to_string(static_cast<long long>(options.cap)));
  std::vector<std::optional<IrrepGenerators>> built(cat.entries.size());
  parallel_for(cat.entries.size(), options.jobs,
               [&](std::size_t i) { built[i].emplace(cat.entries[i].shape, d); });
  std::vector<IrrepGenerators> irreps;
  for (auto& g : built) irreps.push_back(std::move(*g));
  return ReducedProblem(d, d_A, k, std::move(cat), std::move(irreps));
}

ParameterReport parameter_report(const ReducedProblem& problem) {
  return parameter_report(problem.catalog(), problem.d_A());
}

ConicProblem extension_problem(std::shared_ptr<const ReducedProblem> problem, const Eigen::MatrixXcd& target) {
  const Eigen::Index n = static_cast<Eigen::Index>(problem->d_A()) * problem->d();
  if (target.rows() != n || target.cols() != n) throw InvalidArgument("target must be a d_A*d square matrix");
  ConicProblem out;
  out.target = {target};
  out.positive_direction = Blocks{Eigen::MatrixXcd::Identity(n, n)};
  for (std::size_t b = 0; b < problem->block_count(); ++b) {
    out.block_weights.push_back(problem->multiplicity(b));
    out.block_labels.push_back(problem->irreps()[b].shape().to_string());
  }
  out.map = std::make_shared<MarginalMap>(std::move(problem));
  return out;
}

ConicProblem extension_problem(std::shared_ptr<const ReducedProblem> problem, const DensityMatrix& target) {
  if (target.dims().size() != 2 || target.dims()[0] != problem->d_A() || target.dims()[1] != problem->d())
    throw InvalidArgument("target dims must be [d_A, d]");
  return extension_problem(std::move(problem), target.data());
}

namespace {

nlohmann::json complex_array(const Eigen::MatrixXcd& m) {
  nlohmann::json data = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back({m(r, c).real(), m(r, c).imag()});
  return data;
}

nlohmann::json basis_json(const IrrepGenerators& irrep) {
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& p : irrep.basis()) basis.push_back({{"pattern", p.flattened()}, {"weight", pattern_weight(p)}});
  return basis;
}

}  // namespace

void write_generators_json(std::ostream& os, const IrrepGenerators& irrep) {
  nlohmann::json j;
  j["partition"] = irrep.shape().rows();
  j["d"] = irrep.d();
  j["dimension"] = irrep.dimension();
  j["basis"] = basis_json(irrep);
  nlohmann::json matrices = nlohmann::json::array();
  for (int a = 0; a < irrep.d(); ++a)
    for (int b = 0; b < irrep.d(); ++b)
      matrices.push_back({{"a", a}, {"b", b}, {"data", complex_array(irrep.generator(a, b))}});
  j["matrices"] = std::move(matrices);
  os << j.dump() << '\n';
}

void write_problem_json(std::ostream& os, const ReducedProblem& problem, const DensityMatrix* target) {
  nlohmann::json j;
  j["d"] = problem.d();
  j["d_A"] = problem.d_A();
  j["k"] = problem.k();
  nlohmann::json blocks = nlohmann::json::array();
  for (std::size_t b = 0; b < problem.block_count(); ++b) {
    const auto& irrep = problem.irreps()[b];
    const auto& entry = problem.catalog().entries[b];
    nlohmann::json gens = nlohmann::json::array();
    for (int a = 0; a < problem.d(); ++a)
      for (int c = 0; c < problem.d(); ++c) {
        nlohmann::json nz = nlohmann::json::array();
        const auto& t = irrep.generator(a, c);
        for (Eigen::Index r = 0; r < t.rows(); ++r)
          for (Eigen::Index col = 0; col < t.cols(); ++col)
            if (std::abs(t(r, col)) > 1e-14) nz.push_back({r, col, t(r, col).real(), t(r, col).imag()});
        gens.push_back({{"a", a}, {"b", c}, {"nonzeros", std::move(nz)}});
      }
    blocks.push_back({{"partition", entry.shape.rows()},
                      {"multiplicity", entry.multiplicity.str()},
                      {"dimension", entry.dimension.str()},
                      {"coefficient", problem.coefficient(b)},
                      {"basis", basis_json(irrep)},
                      {"generators", std::move(gens)}});
  }
  j["blocks"] = std::move(blocks);
  if (target) j["target"] = {{"dims", target->dims()}, {"data", complex_array(target->data())}};
  os << j.dump() << '\n';
}

}  // namespace symext
