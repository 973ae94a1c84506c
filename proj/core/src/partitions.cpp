#include "symext/partitions.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "symext/error.hpp"

namespace symext {

Partition::Partition(std::vector<int> rows) : rows_(std::move(rows)) {
  while (!rows_.empty() && rows_.back() == 0) rows_.pop_back();
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i] <= 0) throw InvalidArgument("partition rows must be positive: " + to_string());
    if (i > 0 && rows_[i] > rows_[i - 1])
      throw InvalidArgument("partition rows must be weakly decreasing: " + to_string());
    size_ += rows_[i];
  }
}

std::vector<int> Partition::padded(int n) const {
  if (n < length()) throw InvalidArgument("partition " + to_string() + " has more than " + std::to_string(n) + " rows");
  std::vector<int> out(rows_);
  out.resize(static_cast<std::size_t>(n), 0);
  return out;
}

std::string Partition::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_.size(); ++i) os << (i ? "," : "") << rows_[i];
  os << ']';
  return os.str();
}

namespace {

void extend(int remaining, int max_part, int rows_left, std::vector<int>& prefix, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(prefix);
    return;
  }
  if (rows_left == 0) return;
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    prefix.push_back(part);
    extend(remaining - part, part, rows_left - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<Partition> enumerate_partitions(int k, int d) {
  if (k < 1) throw InvalidArgument("enumerate_partitions: k must be positive");
  if (d < 1) throw InvalidArgument("enumerate_partitions: d must be positive");
  std::vector<Partition> out;
  std::vector<int> prefix;
  extend(k, k, d, prefix, out);
  return out;
}

BigInt multiplicity(const Partition& shape) {
  BigInt numerator = 1;
  for (int i = 2; i <= shape.size(); ++i) numerator *= i;
  BigInt hooks = 1;
  const auto& rows = shape.rows();
  for (int i = 0; i < shape.length(); ++i) {
    for (int j = 0; j < rows[static_cast<std::size_t>(i)]; ++j) {
      int below = 0;
      for (int r = i + 1; r < shape.length() && rows[static_cast<std::size_t>(r)] > j; ++r) ++below;
      hooks *= rows[static_cast<std::size_t>(i)] - j + below;
    }
  }
  return numerator / hooks;
}

BigInt weyl_dimension(const Partition& shape, int d) {
  if (d < 1) throw InvalidArgument("weyl_dimension: d must be positive");
  if (shape.length() > d)
    throw InvalidArgument("weyl_dimension: " + shape.to_string() + " has more than " + std::to_string(d) + " rows");
  BigInt numerator = 1;
  BigInt denominator = 1;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      numerator *= shape[static_cast<std::size_t>(i)] - shape[static_cast<std::size_t>(j)] + j - i;
      denominator *= j - i;
    }
  }
  return numerator / denominator;
}

BigInt binomial(unsigned n, unsigned r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  BigInt out = 1;
  for (unsigned i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

BigInt power(unsigned base, unsigned exponent) {
  BigInt out = 1;
  for (unsigned i = 0; i < exponent; ++i) out *= base;
  return out;
}

BigInt IrrepCatalog::tensor_dimension() const {
  BigInt total = 0;
  for (const auto& e : entries) total += e.multiplicity * e.dimension;
  return total;
}

BigInt IrrepCatalog::search_dimension() const {
  BigInt total = 0;
  for (const auto& e : entries) total += e.dimension * e.dimension;
  return total;
}

IrrepCatalog catalog(int k, int d) {
  IrrepCatalog out;
  out.d = d;
  out.k = k;
  for (auto& shape : enumerate_partitions(k, d)) {
    BigInt m = multiplicity(shape);
    BigInt dim = weyl_dimension(shape, d);
    out.entries.push_back({std::move(shape), std::move(m), std::move(dim)});
  }
  return out;
}

std::size_t to_index(const BigInt& value) {
  if (value < 0 || value > BigInt(std::numeric_limits<std::size_t>::max() / 2))
    throw TooLarge("dimension does not fit in a machine index");
  return value.convert_to<std::size_t>();
}

}  // namespace symext
