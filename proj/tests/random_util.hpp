#pragma once

#include <random>

#include <Eigen/Dense>

#include "symext/sdp.hpp"

namespace testutil {

inline Eigen::MatrixXcd random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = {g(rng), g(rng)};
  return 0.5 * (m + m.adjoint());
}

inline Eigen::MatrixXcd random_psd(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = {g(rng), g(rng)};
  return m * m.adjoint();
}

inline symext::Blocks random_blocks(const std::vector<Eigen::Index>& sizes, std::mt19937_64& rng, bool psd = false) {
  symext::Blocks out;
  for (auto n : sizes) out.push_back(psd ? random_psd(n, rng) : random_hermitian(n, rng));
  return out;
}

}  // namespace testutil
