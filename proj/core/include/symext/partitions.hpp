#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace symext {

using BigInt = boost::multiprecision::cpp_int;

/// Young diagram: weakly decreasing positive row lengths.
///
/// Trailing zero rows are dropped at construction so every diagram has a
/// single representation.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> rows);

  const std::vector<int>& rows() const { return rows_; }
  /// Number of boxes.
  int size() const { return size_; }
  /// Number of nonzero rows.
  int length() const { return static_cast<int>(rows_.size()); }
  /// Row i, reading missing rows as zero.
  int operator[](std::size_t i) const { return i < rows_.size() ? rows_[i] : 0; }

  /// Rows padded with zeros to length n (n >= length()).
  std::vector<int> padded(int n) const;
  std::string to_string() const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
    return a.rows_ <=> b.rows_;
  }

 private:
  std::vector<int> rows_;
  int size_ = 0;
};

/// Partitions of k with at most d rows, lexicographically decreasing.
std::vector<Partition> enumerate_partitions(int k, int d);

/// Number of standard Young tableaux of the shape (hook-length formula).
BigInt multiplicity(const Partition& shape);

/// Dimension of the U(d) irrep with highest weight `shape` (Weyl formula).
BigInt weyl_dimension(const Partition& shape, int d);

BigInt binomial(unsigned n, unsigned r);
BigInt power(unsigned base, unsigned exponent);

struct IrrepEntry {
  Partition shape;
  BigInt multiplicity;
  BigInt dimension;
};

/// Every irrep appearing in the k-fold tensor power of C^d.
struct IrrepCatalog {
  int d = 0;
  int k = 0;
  std::vector<IrrepEntry> entries;

  /// Sum of m * D; equals d^k.
  BigInt tensor_dimension() const;
  /// Sum of D^2; equals C(d^2 - 1 + k, k).
  BigInt search_dimension() const;
};

IrrepCatalog catalog(int k, int d);

/// Narrow an exact count to a machine index, throwing TooLarge on overflow.
std::size_t to_index(const BigInt& value);

}  // namespace symext
