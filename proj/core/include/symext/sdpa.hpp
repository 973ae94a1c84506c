#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "symext/sdp.hpp"

namespace symext {

class ReducedProblem;

/// [[Re H, -Im H], [Im H, Re H]].
Eigen::MatrixXd realify(const Eigen::MatrixXcd& h);

/// Parsed contents of an SDPA sparse file.
struct SdpaFile {
  struct Entry {
    int matno = 0;
    int block = 0;
    int i = 0;
    int j = 0;
    double value = 0.0;
  };
  std::vector<std::string> comments;
  int m = 0;
  std::vector<int> block_struct;
  std::vector<double> c;
  std::vector<Entry> entries;

  /// Dense symmetric F_matno restricted to one block (both 1-based).
  Eigen::MatrixXd matrix(int matno, int block) const;
};

/// The problem in SDPA dual form: Y >= 0 with F_t . Y = c_t, Y block
/// diagonal with realified blocks. The constraints are F_t = R(map^H E_t)/2
/// for an orthonormal basis E_t of the range of the map, so feasibility of
/// the exported problem is equivalent to feasibility of `problem`.
SdpaFile to_sdpa(const ConicProblem& problem);

void write_sdpa(std::ostream& os, const SdpaFile& file);
SdpaFile read_sdpa(std::istream& is);
SdpaFile read_sdpa(const std::string& path);

/// Writes `path` and `<stem>.labels.json` next to it. Throws std::runtime_error
/// on I/O failure. When `reduced` is given the sidecar also lists the GT
/// pattern behind each row of every block.
void export_sdpa(const ConicProblem& problem, const std::string& path, const ReducedProblem* reduced = nullptr);

/// Sidecar path for an export target: `out.dat-s` -> `out.labels.json`.
std::string labels_path(const std::string& path);

}  // namespace symext
