#include "symext/gt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "symext/error.hpp"

namespace symext {

GTPattern::GTPattern(std::vector<std::vector<int>> levels) : levels_(std::move(levels)) {
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    if (levels_[l].size() != l + 1) throw InvalidArgument("GT pattern level " + std::to_string(l + 1) + " has wrong length");
  }
  for (int l = 2; l <= d(); ++l) {
    for (int i = 1; i < l; ++i) {
      if (entry(i, l) < entry(i, l - 1) || entry(i, l - 1) < entry(i + 1, l))
        throw InvalidArgument("GT pattern levels " + std::to_string(l - 1) + " and " + std::to_string(l) + " do not interlace");
    }
  }
}

std::vector<int> GTPattern::flattened() const {
  std::vector<int> out;
  for (auto it = levels_.rbegin(); it != levels_.rend(); ++it) out.insert(out.end(), it->begin(), it->end());
  return out;
}

namespace {

void descend(std::vector<std::vector<int>>& levels, int level, std::vector<GTPattern>& out) {
  if (level == 1) {
    out.emplace_back(levels);
    return;
  }
  const auto& upper = levels[static_cast<std::size_t>(level - 1)];
  auto& lower = levels[static_cast<std::size_t>(level - 2)];
  // Fill lower[i] in [upper[i+1], upper[i]] for every i, odometer style.
  lower.assign(static_cast<std::size_t>(level - 1), 0);
  for (std::size_t i = 0; i < lower.size(); ++i) lower[i] = upper[i + 1];
  while (true) {
    descend(levels, level - 1, out);
    std::size_t i = 0;
    for (; i < lower.size(); ++i) {
      if (lower[i] < upper[i]) {
        ++lower[i];
        break;
      }
      lower[i] = upper[i + 1];
    }
    if (i == lower.size()) break;
  }
}

}  // namespace

std::vector<GTPattern> enumerate_gt_patterns(const Partition& shape, int d) {
  if (d < 1) throw InvalidArgument("enumerate_gt_patterns: d must be positive");
  if (shape.length() > d)
    throw InvalidArgument("enumerate_gt_patterns: " + shape.to_string() + " has more than " + std::to_string(d) + " rows");
  std::vector<std::vector<int>> levels(static_cast<std::size_t>(d));
  for (int l = 1; l <= d; ++l) levels[static_cast<std::size_t>(l - 1)].assign(static_cast<std::size_t>(l), 0);
  levels.back() = shape.padded(d);
  std::vector<GTPattern> out;
  descend(levels, d, out);
  std::sort(out.begin(), out.end(),
            [](const GTPattern& a, const GTPattern& b) { return a.flattened() > b.flattened(); });
  return out;
}

std::vector<int> pattern_weight(const GTPattern& pattern) {
  std::vector<int> weight(static_cast<std::size_t>(pattern.d()));
  int previous = 0;
  for (int l = 1; l <= pattern.d(); ++l) {
    const auto& row = pattern.row(l);
    int sum = std::accumulate(row.begin(), row.end(), 0);
    weight[static_cast<std::size_t>(l - 1)] = sum - previous;
    previous = sum;
  }
  return weight;
}

namespace {

// <M - delta_{k,l}| E_{l+1,l} |M>, non-negative root convention.
double lowering_element(const GTPattern& m, int k, int l) {
  const double mkl = m.entry(k, l);
  double numerator = 1.0;
  for (int kp = 1; kp <= l + 1; ++kp) numerator *= m.entry(kp, l + 1) - mkl - kp + k + 1;
  for (int kp = 1; kp <= l - 1; ++kp) numerator *= m.entry(kp, l - 1) - mkl - kp + k;
  double denominator = 1.0;
  for (int kp = 1; kp <= l; ++kp) {
    if (kp == k) continue;
    denominator *= (m.entry(kp, l) - mkl - kp + k + 1) * (m.entry(kp, l) - mkl - kp + k);
  }
  const double value = -numerator / denominator;
  if (value < -1e-9) throw InternalError("negative squared GT matrix element");
  return std::sqrt(std::max(value, 0.0));
}

bool interlaces_at(const GTPattern& m, int k, int l) {
  // Only level l entry k changed; check its two neighbouring constraints.
  if (m.entry(k, l) > m.entry(k, l + 1) || m.entry(k, l) < m.entry(k + 1, l + 1)) return false;
  if (l > 1) {
    if (k <= l - 1 && m.entry(k, l) < m.entry(k, l - 1)) return false;
    if (k >= 2 && m.entry(k - 1, l - 1) < m.entry(k, l)) return false;
  }
  return true;
}

}  // namespace

IrrepGenerators::IrrepGenerators(Partition shape, int d)
    : shape_(std::move(shape)), d_(d), basis_(enumerate_gt_patterns(shape_, d)) {
  const Eigen::Index n = dimension();
  matrices_.assign(static_cast<std::size_t>(d * d), Eigen::MatrixXcd::Zero(n, n));
  auto at = [&](int a, int b) -> Eigen::MatrixXcd& { return matrices_[static_cast<std::size_t>(a * d_ + b)]; };

  for (Eigen::Index s = 0; s < n; ++s) {
    const auto w = pattern_weight(basis_[static_cast<std::size_t>(s)]);
    for (int a = 0; a < d; ++a) at(a, a)(s, s) = w[static_cast<std::size_t>(a)];
  }

  // Simple lowering E_{l+1,l} (1-based) is T_{l,l-1} (0-based).
  for (int l = 1; l < d; ++l) {
    auto& lower = at(l, l - 1);
    for (Eigen::Index s = 0; s < n; ++s) {
      const auto& source = basis_[static_cast<std::size_t>(s)];
      for (int k = 1; k <= l; ++k) {
        GTPattern target = source;
        --target.entry(k, l);
        if (!interlaces_at(target, k, l)) continue;
        const Eigen::Index t = index_of(target);
        if (t < 0) throw InternalError("GT lowering left the pattern set");
        lower(t, s) = lowering_element(source, k, l);
      }
    }
    at(l - 1, l) = lower.adjoint();
  }

  for (int distance = 2; distance < d; ++distance) {
    for (int a = 0; a < d; ++a) {
      for (int b : {a + distance, a - distance}) {
        if (b < 0 || b >= d) continue;
        const int c = a < b ? b - 1 : b + 1;
        at(a, b) = at(a, c) * at(c, b) - at(c, b) * at(a, c);
      }
    }
  }
}

Eigen::Index IrrepGenerators::index_of(const GTPattern& pattern) const {
  const auto key = pattern.flattened();
  auto it = std::lower_bound(basis_.begin(), basis_.end(), key,
                             [](const GTPattern& p, const std::vector<int>& k) { return p.flattened() > k; });
  if (it == basis_.end() || !(*it == pattern)) return -1;
  return static_cast<Eigen::Index>(it - basis_.begin());
}

Eigen::MatrixXcd generator_matrix(const IrrepGenerators& g, int a, int b) {
  if (a < 0 || b < 0 || a >= g.d() || b >= g.d()) throw InvalidArgument("generator_matrix: index out of range");
  return g.generator(a, b);
}

double commutation_residual(const IrrepGenerators& g) {
  const int d = g.d();
  double worst = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          Eigen::MatrixXcd r = g.generator(a, b) * g.generator(c, e) - g.generator(c, e) * g.generator(a, b);
          if (b == c) r -= g.generator(a, e);
          if (e == a) r += g.generator(c, b);
          worst = std::max(worst, r.cwiseAbs().maxCoeff());
        }
  return worst;
}

double casimir_residual(const IrrepGenerators& g) {
  const Eigen::Index n = g.dimension();
  Eigen::MatrixXcd casimir = Eigen::MatrixXcd::Zero(n, n);
  for (int a = 0; a < g.d(); ++a)
    for (int b = 0; b < g.d(); ++b) casimir += g.generator(a, b) * g.generator(b, a);
  const Eigen::VectorXcd diag = casimir.diagonal();
  const double scale = std::max(1.0, diag.cwiseAbs().maxCoeff());
  Eigen::MatrixXcd off = casimir;
  off.diagonal().setZero();
  const double spread = diag.real().maxCoeff() - diag.real().minCoeff();
  return std::max({off.cwiseAbs().maxCoeff(), spread, diag.imag().cwiseAbs().maxCoeff()}) / scale;
}

}  // namespace symext
