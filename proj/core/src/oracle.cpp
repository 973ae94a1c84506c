#include "symext/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "symext/error.hpp"

namespace symext::oracle {

namespace {

Eigen::Index checked_power(int d, int k, Eigen::Index cap) {
  if (d < 1 || k < 1) throw InvalidArgument("d and k must be positive");
  Eigen::Index n = 1;
  for (int i = 0; i < k; ++i) {
    n *= d;
    if (n > cap) throw TooLarge("tensor space dimension exceeds the oracle cap of " + std::to_string(cap));
  }
  return n;
}

std::vector<int> digits(Eigen::Index x, int d, int k) {
  std::vector<int> out(static_cast<std::size_t>(k));
  for (int s = k - 1; s >= 0; --s) {
    out[static_cast<std::size_t>(s)] = static_cast<int>(x % d);
    x /= d;
  }
  return out;
}

Eigen::Index from_digits(const std::vector<int>& dig, int d) {
  Eigen::Index x = 0;
  for (int v : dig) x = x * d + v;
  return x;
}

}  // namespace

std::vector<int> transposition(int k, int s, int t) {
  if (s < 0 || t < 0 || s >= k || t >= k) throw InvalidArgument("transposition: site out of range");
  std::vector<int> perm(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::swap(perm[static_cast<std::size_t>(s)], perm[static_cast<std::size_t>(t)]);
  return perm;
}

PermutationOperator permutation_operator(int d, int k, std::vector<int> perm, Eigen::Index cap) {
  if (static_cast<int>(perm.size()) != k) throw InvalidArgument("permutation must have k entries");
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  for (int p : perm) {
    if (p < 0 || p >= k || seen[static_cast<std::size_t>(p)]) throw InvalidArgument("not a permutation of the sites");
    seen[static_cast<std::size_t>(p)] = true;
  }
  const Eigen::Index n = checked_power(d, k, cap);
  PermutationOperator out{d, k, perm, Eigen::MatrixXcd::Zero(n, n)};
  for (Eigen::Index x = 0; x < n; ++x) {
    const auto in = digits(x, d, k);
    std::vector<int> moved(in.size());
    for (int s = 0; s < k; ++s) moved[static_cast<std::size_t>(perm[static_cast<std::size_t>(s)])] = in[static_cast<std::size_t>(s)];
    out.matrix(from_digits(moved, d), x) = 1.0;
  }
  return out;
}

Eigen::MatrixXcd collective_generator(int d, int k, int a, int b, Eigen::Index cap) {
  if (a < 0 || b < 0 || a >= d || b >= d) throw InvalidArgument("collective_generator: index out of range");
  const Eigen::Index n = checked_power(d, k, cap);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    auto dig = digits(x, d, k);
    for (int s = 0; s < k; ++s) {
      if (dig[static_cast<std::size_t>(s)] != b) continue;
      dig[static_cast<std::size_t>(s)] = a;
      out(from_digits(dig, d), x) += 1.0;
      dig[static_cast<std::size_t>(s)] = b;
    }
  }
  return out;
}

std::vector<SubspaceIsometry> build_isometries(const IrrepGenerators& irrep, int k, Eigen::Index cap) {
  const int d = irrep.d();
  const Partition& shape = irrep.shape();
  if (shape.size() != k) throw InvalidArgument("build_isometries: partition size differs from k");
  const Eigen::Index n = checked_power(d, k, cap);
  const Eigen::Index dim = irrep.dimension();

  std::vector<Eigen::MatrixXcd> lowering;
  std::vector<Eigen::MatrixXcd> raising;
  for (int l = 1; l < d; ++l) {
    lowering.push_back(collective_generator(d, k, l, l - 1, cap));
    raising.push_back(collective_generator(d, k, l - 1, l, cap));
  }

  // Top weight space: basis states whose digit counts equal the shape.
  const auto top = shape.padded(d);
  std::vector<Eigen::Index> top_states;
  for (Eigen::Index x = 0; x < n; ++x) {
    std::vector<int> count(static_cast<std::size_t>(d), 0);
    for (int v : digits(x, d, k)) ++count[static_cast<std::size_t>(v)];
    if (count == top) top_states.push_back(x);
  }
  const auto t = static_cast<Eigen::Index>(top_states.size());
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(t, t);
  for (const auto& r : raising) {
    Eigen::MatrixXcd cols(n, t);
    for (Eigen::Index c = 0; c < t; ++c) cols.col(c) = r.col(top_states[static_cast<std::size_t>(c)]);
    gram += cols.adjoint() * cols;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
  std::vector<Eigen::VectorXcd> highest;
  for (Eigen::Index c = 0; c < t; ++c) {
    if (eig.eigenvalues()(c) > 1e-9) continue;
    Eigen::VectorXcd h = Eigen::VectorXcd::Zero(n);
    for (Eigen::Index s = 0; s < t; ++s) h(top_states[static_cast<std::size_t>(s)]) = eig.eigenvectors()(s, c);
    highest.push_back(h);
  }
  const auto copies = to_index(multiplicity(shape));
  if (highest.size() != copies)
    throw InternalError("found " + std::to_string(highest.size()) + " highest-weight vectors for " + shape.to_string() +
                        ", expected " + std::to_string(copies));

  // Basis positions grouped by weight.
  std::map<std::vector<int>, std::vector<Eigen::Index>> positions;
  for (Eigen::Index p = 0; p < dim; ++p) positions[pattern_weight(irrep.basis()[static_cast<std::size_t>(p)])].push_back(p);

  std::vector<SubspaceIsometry> out;
  for (std::size_t copy = 0; copy < highest.size(); ++copy) {
    struct Span {
      std::vector<Eigen::VectorXcd> irrep_side;
      std::vector<Eigen::VectorXcd> tensor_side;
    };
    std::map<std::vector<int>, Span> spans;
    std::deque<std::pair<Eigen::VectorXcd, Eigen::VectorXcd>> queue;

    Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(dim);
    e0(0) = 1.0;
    spans[pattern_weight(irrep.basis()[0])] = {{e0}, {highest[copy]}};
    queue.emplace_back(e0, highest[copy]);

    auto weight_of = [&](const Eigen::VectorXcd& u) {
      Eigen::Index p = 0;
      u.cwiseAbs().maxCoeff(&p);
      return pattern_weight(irrep.basis()[static_cast<std::size_t>(p)]);
    };

    while (!queue.empty()) {
      auto [u, v] = std::move(queue.front());
      queue.pop_front();
      for (int l = 1; l < d; ++l) {
        Eigen::VectorXcd u2 = irrep.generator(l, l - 1) * u;
        const double before = u2.norm();
        if (before < 1e-12) continue;
        Eigen::VectorXcd v2 = lowering[static_cast<std::size_t>(l - 1)] * v;
        const auto w = weight_of(u2);
        auto& span = spans[w];
        if (span.irrep_side.size() == positions[w].size()) continue;
        for (std::size_t q = 0; q < span.irrep_side.size(); ++q) {
          const std::complex<double> overlap = span.irrep_side[q].dot(u2);
          u2 -= overlap * span.irrep_side[q];
          v2 -= overlap * span.tensor_side[q];
        }
        const double after = u2.norm();
        if (after < 1e-8 * before) continue;
        u2 /= after;
        v2 /= after;
        span.irrep_side.push_back(u2);
        span.tensor_side.push_back(v2);
        queue.emplace_back(std::move(u2), std::move(v2));
      }
    }

    Eigen::MatrixXcd columns = Eigen::MatrixXcd::Zero(n, dim);
    for (const auto& [w, pos] : positions) {
      const auto& span = spans[w];
      if (span.irrep_side.size() != pos.size())
        throw InternalError("lowering did not reach every basis vector of " + shape.to_string());
      const auto r = static_cast<Eigen::Index>(pos.size());
      Eigen::MatrixXcd q(r, r);
      Eigen::MatrixXcd tensor(n, r);
      for (Eigen::Index c = 0; c < r; ++c) {
        for (Eigen::Index row = 0; row < r; ++row) q(row, c) = span.irrep_side[static_cast<std::size_t>(c)](pos[static_cast<std::size_t>(row)]);
        tensor.col(c) = span.tensor_side[static_cast<std::size_t>(c)];
      }
      // V_pos q = tensor, q unitary.
      const Eigen::MatrixXcd v_pos = tensor * q.adjoint();
      for (Eigen::Index c = 0; c < r; ++c) columns.col(pos[static_cast<std::size_t>(c)]) = v_pos.col(c);
    }
    const double defect = (columns.adjoint() * columns - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
    if (defect > 1e-8) throw InternalError("isometry for " + shape.to_string() + " is not orthonormal");
    out.push_back({shape, static_cast<int>(copy), std::move(columns)});
  }
  return out;
}

std::vector<SubspaceIsometry> build_isometries(const Partition& shape, int d, int k, Eigen::Index cap) {
  checked_power(d, k, cap);
  return build_isometries(IrrepGenerators(shape, d), k, cap);
}

std::vector<std::vector<SubspaceIsometry>> schur_basis(const ReducedProblem& problem, Eigen::Index cap) {
  std::vector<std::vector<SubspaceIsometry>> out;
  for (const auto& irrep : problem.irreps()) out.push_back(build_isometries(irrep, problem.k(), cap));
  return out;
}

Eigen::MatrixXcd embed_blocks(const Blocks& blocks, const std::vector<std::vector<SubspaceIsometry>>& basis, int d_A,
                              Eigen::Index cap) {
  if (blocks.size() != basis.size()) throw InvalidArgument("embed_blocks: one isometry set per block required");
  if (basis.empty() || basis.front().empty()) throw InvalidArgument("embed_blocks: empty basis");
  const Eigen::Index n = basis.front().front().columns.rows();
  if (n * d_A > cap) throw TooLarge("embedded dimension exceeds the oracle cap");
  const Eigen::Index full = n * d_A;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(full, full);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (const auto& iso : basis[b]) {
      const Eigen::Index dim = iso.columns.cols();
      if (blocks[b].rows() != d_A * dim || blocks[b].cols() != d_A * dim)
        throw InvalidArgument("embed_blocks: block " + std::to_string(b) + " has the wrong shape");
      Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(full, d_A * dim);
      for (int a = 0; a < d_A; ++a) w.block(a * n, a * dim, n, dim) = iso.columns;
      out += w * blocks[b] * w.adjoint();
    }
  }
  return out;
}

NaiveExtensionMap::NaiveExtensionMap(int d_A, int d, int k, Eigen::Index cap) : d_A_(d_A), d_(d), k_(k) {
  if (d_A < 1 || d < 1 || k < 1) throw InvalidArgument("NaiveExtensionMap: dimensions must be positive");
  const Eigen::Index n = checked_power(d, k, cap);
  full_ = n * d_A;
  if (full_ > cap) throw TooLarge("full space dimension exceeds the oracle cap of " + std::to_string(cap));
  dims_.push_back(d_A);
  for (int s = 0; s < k; ++s) dims_.push_back(d);
  for (int s = 0; s + 1 < k; ++s) {
    std::vector<Eigen::Index> sigma(static_cast<std::size_t>(full_));
    for (Eigen::Index a = 0; a < d_A; ++a)
      for (Eigen::Index x = 0; x < n; ++x) {
        auto dig = digits(x, d, k);
        std::swap(dig[static_cast<std::size_t>(s)], dig[static_cast<std::size_t>(s + 1)]);
        sigma[static_cast<std::size_t>(a * n + x)] = a * n + from_digits(dig, d);
      }
    swaps_.push_back(std::move(sigma));
  }
}

std::vector<Eigen::Index> NaiveExtensionMap::codomain_sizes() const {
  std::vector<Eigen::Index> out{static_cast<Eigen::Index>(d_A_) * d_};
  for (std::size_t s = 0; s < swaps_.size(); ++s) out.push_back(full_);
  return out;
}

Eigen::MatrixXcd NaiveExtensionMap::marginal(const Eigen::MatrixXcd& x) const { return partial_trace(x, dims_, {0, 1}); }

namespace {

Eigen::MatrixXcd conjugate_by(const Eigen::MatrixXcd& x, const std::vector<Eigen::Index>& sigma) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) out(i, j) = x(sigma[static_cast<std::size_t>(i)], sigma[static_cast<std::size_t>(j)]);
  return out;
}

}  // namespace

double NaiveExtensionMap::symmetry_residual(const Eigen::MatrixXcd& x) const {
  double worst = 0.0;
  for (const auto& sigma : swaps_) worst = std::max(worst, (conjugate_by(x, sigma) - x).cwiseAbs().maxCoeff());
  return worst;
}

Blocks NaiveExtensionMap::apply(const Blocks& x) const {
  if (x.size() != 1 || x[0].rows() != full_) throw InvalidArgument("NaiveExtensionMap: wrong variable shape");
  Blocks out{marginal(x[0])};
  for (const auto& sigma : swaps_) out.push_back(conjugate_by(x[0], sigma) - x[0]);
  return out;
}

Blocks NaiveExtensionMap::adjoint(const Blocks& y) const {
  if (y.size() != swaps_.size() + 1) throw InvalidArgument("NaiveExtensionMap: wrong constraint shape");
  const Eigen::Index rest = full_ / (static_cast<Eigen::Index>(d_A_) * d_);
  const Eigen::Index m = y[0].rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(full_, full_);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c)
      out.block(r * rest, c * rest, rest, rest).diagonal().setConstant(y[0](r, c));
  for (std::size_t s = 0; s < swaps_.size(); ++s) out += conjugate_by(y[s + 1], swaps_[s]) - y[s + 1];
  return {out};
}

ConicProblem naive_extension_sdp(const DensityMatrix& rho_ab, int k, Eigen::Index cap) {
  if (rho_ab.dims().size() != 2) throw InvalidArgument("naive_extension_sdp: rho_AB must have two factors");
  auto map = std::make_shared<NaiveExtensionMap>(rho_ab.dims()[0], rho_ab.dims()[1], k, cap);
  ConicProblem out;
  out.target = zeros_like(map->codomain_sizes());
  out.target[0] = rho_ab.data();
  Blocks direction = zeros_like(map->codomain_sizes());
  direction[0].setIdentity();
  out.positive_direction = std::move(direction);
  out.block_labels = {"full"};
  out.map = std::move(map);
  return out;
}

ExtensionCheck check_extension(const Eigen::MatrixXcd& full, const DensityMatrix& rho_ab, int k) {
  const NaiveExtensionMap map(rho_ab.dims()[0], rho_ab.dims()[1], k, full.rows());
  if (full.rows() != map.domain_sizes()[0]) throw InvalidArgument("check_extension: wrong full-space dimension");
  ExtensionCheck out;
  out.min_eigenvalue = min_eigenvalue({full});
  out.marginal_error = (map.marginal(full) - rho_ab.data()).cwiseAbs().maxCoeff();
  out.symmetry_error = map.symmetry_residual(full);
  return out;
}

namespace fixtures {

Eigen::VectorXcd ket(const std::string& digit_string, int d) {
  Eigen::Index n = 1;
  Eigen::Index x = 0;
  for (char ch : digit_string) {
    const int v = ch - '0';
    if (v < 0 || v >= d) throw InvalidArgument("ket: digit out of range");
    n *= d;
    x = x * d + v;
  }
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  out(x) = 1.0;
  return out;
}

namespace {

using Term = std::pair<double, const char*>;

Eigen::VectorXcd combo(std::initializer_list<Term> terms, double norm_sq) {
  Eigen::VectorXcd out;
  for (const auto& [coef, digit_string] : terms) {
    Eigen::VectorXcd k = ket(digit_string, 3);
    if (out.size() == 0) out = Eigen::VectorXcd::Zero(k.size());
    out += coef * k;
  }
  return out / std::sqrt(norm_sq);
}

}  // namespace

std::vector<Eigen::VectorXcd> two_qutrit_symmetric() {
  return {combo({{1, "00"}}, 1), combo({{1, "11"}}, 1), combo({{1, "22"}}, 1),
          combo({{1, "01"}, {1, "10"}}, 2), combo({{1, "02"}, {1, "20"}}, 2), combo({{1, "12"}, {1, "21"}}, 2)};
}

std::vector<Eigen::VectorXcd> two_qutrit_antisymmetric() {
  return {combo({{1, "01"}, {-1, "10"}}, 2), combo({{1, "02"}, {-1, "20"}}, 2), combo({{1, "12"}, {-1, "21"}}, 2)};
}

std::vector<Eigen::VectorXcd> three_qutrit_mixed_first() {
  return {
      combo({{2, "001"}, {-1, "010"}, {-1, "100"}}, 6),
      combo({{2, "002"}, {-1, "020"}, {-1, "200"}}, 6),
      combo({{1, "011"}, {1, "101"}, {-2, "110"}}, 6),
      combo({{2, "012"}, {-1, "021"}, {2, "102"}, {-1, "120"}, {-1, "201"}, {-1, "210"}}, 12),
      combo({{1, "021"}, {-1, "120"}, {1, "201"}, {-1, "210"}}, 4),
      combo({{1, "022"}, {1, "202"}, {-2, "220"}}, 6),
      combo({{2, "112"}, {-1, "121"}, {-1, "211"}}, 6),
      combo({{1, "122"}, {1, "212"}, {-2, "221"}}, 6),
  };
}

std::vector<Eigen::VectorXcd> three_qutrit_mixed_second() {
  return {
      combo({{1, "010"}, {-1, "100"}}, 2),
      combo({{1, "020"}, {-1, "200"}}, 2),
      combo({{1, "011"}, {-1, "101"}}, 2),
      combo({{1, "021"}, {1, "120"}, {-1, "201"}, {-1, "210"}}, 4),
      combo({{2, "012"}, {1, "021"}, {-2, "102"}, {-1, "120"}, {-1, "201"}, {1, "210"}}, 12),
      combo({{1, "022"}, {-1, "202"}}, 2),
      combo({{1, "121"}, {-1, "211"}}, 2),
      combo({{1, "122"}, {-1, "212"}}, 2),
  };
}

std::vector<CoefficientTerm> two_qutrit_symmetric_coefficients() {
  const double r2 = std::sqrt(2.0);
  return {
      {0, 0, 1, 1, 2}, {0, 0, 4, 4, 1}, {0, 0, 5, 5, 1},
      {1, 1, 2, 2, 2}, {1, 1, 4, 4, 1}, {1, 1, 6, 6, 1},
      {2, 2, 3, 3, 2}, {2, 2, 5, 5, 1}, {2, 2, 6, 6, 1},
      {0, 1, 4, 1, r2}, {0, 1, 2, 4, r2}, {0, 1, 6, 5, 1},
      {0, 2, 5, 1, r2}, {0, 2, 3, 5, r2}, {0, 2, 6, 4, 1},
      {1, 2, 6, 2, r2}, {1, 2, 3, 6, r2}, {1, 2, 5, 4, 1},
  };
}

std::vector<CoefficientTerm> two_qutrit_antisymmetric_coefficients() {
  return {
      {0, 0, 1, 1, 1}, {0, 0, 2, 2, 1},
      {1, 1, 1, 1, 1}, {1, 1, 3, 3, 1},
      {2, 2, 2, 2, 1}, {2, 2, 3, 3, 1},
      {0, 1, 3, 2, 1},
      {0, 2, 3, 1, -1},
      {1, 2, 2, 1, 1},
  };
}

}  // namespace fixtures
}  // namespace symext::oracle
