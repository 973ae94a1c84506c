#include "symext/sdpa.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "symext/error.hpp"
#include "symext/reduction.hpp"

namespace symext {

Eigen::MatrixXd realify(const Eigen::MatrixXcd& h) {
  const Eigen::Index n = h.rows();
  Eigen::MatrixXd out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = h.real();
  out.topRightCorner(n, n) = -h.imag();
  out.bottomLeftCorner(n, n) = h.imag();
  out.bottomRightCorner(n, n) = h.real();
  return out;
}

Eigen::MatrixXd SdpaFile::matrix(int matno, int block) const {
  if (block < 1 || block > static_cast<int>(block_struct.size())) throw InvalidArgument("SdpaFile: block out of range");
  const int n = std::abs(block_struct[static_cast<std::size_t>(block - 1)]);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : entries) {
    if (e.matno != matno || e.block != block) continue;
    out(e.i - 1, e.j - 1) = e.value;
    out(e.j - 1, e.i - 1) = e.value;
  }
  return out;
}

namespace {

struct ConstraintBasis {
  // Columns: constraint directions in codomain coordinates.
  Eigen::MatrixXd directions;
  bool canonical = true;
};

ConstraintBasis constraint_basis(const LinearMap& map) {
  const auto sizes = map.codomain_sizes();
  Eigen::Index m = 0;
  for (auto n : sizes) m += n * n;
  Eigen::MatrixXd images(coordinates(map.adjoint(zeros_like(sizes))).size(), m);
  for (Eigen::Index t = 0; t < m; ++t) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
    e(t) = 1.0;
    images.col(t) = coordinates(map.adjoint(from_coordinates(e, sizes)));
  }
  const Eigen::MatrixXd gram = images.transpose() * images;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const double top = eig.eigenvalues().cwiseAbs().maxCoeff();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < m; ++i)
    if (eig.eigenvalues()(i) > 1e-10 * top) ++rank;
  ConstraintBasis out;
  if (rank == m) {
    out.directions = Eigen::MatrixXd::Identity(m, m);
    return out;
  }
  out.canonical = false;
  out.directions.resize(m, rank);
  Eigen::Index c = 0;
  for (Eigen::Index i = m - 1; i >= 0; --i)
    if (eig.eigenvalues()(i) > 1e-10 * top) out.directions.col(c++) = eig.eigenvectors().col(i);
  return out;
}

void add_entries(SdpaFile& file, int matno, const Blocks& blocks, double scale) {
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Eigen::MatrixXd r = realify(blocks[b]);
    for (Eigen::Index i = 0; i < r.rows(); ++i)
      for (Eigen::Index j = i; j < r.cols(); ++j) {
        const double v = scale * 0.5 * (r(i, j) + r(j, i));
        if (std::abs(v) > 1e-15)
          file.entries.push_back({matno, static_cast<int>(b) + 1, static_cast<int>(i) + 1, static_cast<int>(j) + 1, v});
      }
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SdpaFile to_sdpa(const ConicProblem& problem) {
  const LinearMap& map = *problem.map;
  const auto sizes = map.codomain_sizes();
  const auto basis = constraint_basis(map);
  const Eigen::VectorXd b = coordinates(problem.target);

  SdpaFile file;
  file.comments.push_back("complex Hermitian blocks realified as [[Re, -Im], [Im, Re]]");
  file.comments.push_back(basis.canonical ? "constraints: orthonormal Hermitian coordinates of the target space"
                                          : "constraints: orthonormal basis of the range of the constraint map");
  file.m = static_cast<int>(basis.directions.cols());
  for (auto n : map.domain_sizes()) file.block_struct.push_back(static_cast<int>(2 * n));
  if (problem.objective) add_entries(file, 0, *problem.objective, -0.5);
  for (Eigen::Index t = 0; t < basis.directions.cols(); ++t) {
    const Eigen::VectorXd u = basis.directions.col(t);
    file.c.push_back(u.dot(b));
    add_entries(file, static_cast<int>(t) + 1, map.adjoint(from_coordinates(u, sizes)), 0.5);
  }
  return file;
}

void write_sdpa(std::ostream& os, const SdpaFile& file) {
  for (const auto& c : file.comments) os << "* " << c << '\n';
  os << file.m << " = mDIM\n";
  os << file.block_struct.size() << " = nBLOCK\n";
  for (std::size_t i = 0; i < file.block_struct.size(); ++i) os << (i ? " " : "") << file.block_struct[i];
  os << " = bLOCKsTRUCT\n";
  for (std::size_t i = 0; i < file.c.size(); ++i) os << (i ? " " : "") << format_double(file.c[i]);
  os << '\n';
  for (const auto& e : file.entries)
    os << e.matno << ' ' << e.block << ' ' << e.i << ' ' << e.j << ' ' << format_double(e.value) << '\n';
}

namespace {

std::string strip_label(const std::string& line) {
  // Drop "= name" trailers and SDPA punctuation.
  std::string out = line.substr(0, line.find('='));
  for (char& ch : out)
    if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
  return out;
}

}  // namespace

SdpaFile read_sdpa(std::istream& is) {
  SdpaFile file;
  std::string line;
  std::vector<std::string> body;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '*' || line[0] == '"') {
      file.comments.push_back(line.size() > 2 ? line.substr(2) : "");
      continue;
    }
    body.push_back(strip_label(line));
  }
  if (body.size() < 4) throw InvalidArgument("SDPA file is truncated");
  auto parse_error = [] { return InvalidArgument("malformed SDPA file"); };
  {
    std::istringstream s(body[0]);
    if (!(s >> file.m)) throw parse_error();
  }
  int nblock = 0;
  {
    std::istringstream s(body[1]);
    if (!(s >> nblock) || nblock < 1) throw parse_error();
  }
  {
    std::istringstream s(body[2]);
    for (int i = 0; i < nblock; ++i) {
      int v = 0;
      if (!(s >> v)) throw parse_error();
      file.block_struct.push_back(v);
    }
  }
  {
    std::istringstream s(body[3]);
    for (int i = 0; i < file.m; ++i) {
      double v = 0.0;
      if (!(s >> v)) throw parse_error();
      file.c.push_back(v);
    }
  }
  for (std::size_t r = 4; r < body.size(); ++r) {
    std::istringstream s(body[r]);
    SdpaFile::Entry e;
    if (!(s >> e.matno >> e.block >> e.i >> e.j >> e.value)) throw parse_error();
    if (e.matno < 0 || e.matno > file.m || e.block < 1 || e.block > nblock) throw parse_error();
    file.entries.push_back(e);
  }
  return file;
}

SdpaFile read_sdpa(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_sdpa(in);
}

std::string labels_path(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  const std::string stem = (dot != std::string::npos && (slash == std::string::npos || dot > slash)) ? path.substr(0, dot) : path;
  return stem + ".labels.json";
}

void export_sdpa(const ConicProblem& problem, const std::string& path, const ReducedProblem* reduced) {
  const SdpaFile file = to_sdpa(problem);
  {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_sdpa(out, file);
    if (!out) throw std::runtime_error("write failed for " + path);
  }

  nlohmann::json j;
  j["sdpa"] = path.substr(path.find_last_of('/') == std::string::npos ? 0 : path.find_last_of('/') + 1);
  j["realification"] = "[[Re, -Im], [Im, Re]]; complex row r of a block of size n is realified rows r+1 and r+n+1";
  nlohmann::json blocks = nlohmann::json::array();
  const auto domain = problem.map->domain_sizes();
  for (std::size_t b = 0; b < domain.size(); ++b) {
    nlohmann::json entry{{"block", b + 1},
                         {"label", b < problem.block_labels.size() ? problem.block_labels[b] : std::to_string(b)},
                         {"complex_size", domain[b]},
                         {"size", 2 * domain[b]}};
    if (reduced) {
      const auto& irrep = reduced->irreps()[b];
      entry["partition"] = irrep.shape().rows();
      entry["multiplicity"] = reduced->catalog().entries[b].multiplicity.str();
      nlohmann::json rows = nlohmann::json::array();
      for (int a = 0; a < reduced->d_A(); ++a)
        for (Eigen::Index w = 0; w < irrep.dimension(); ++w)
          rows.push_back({{"a", a}, {"pattern", irrep.basis()[static_cast<std::size_t>(w)].flattened()}});
      entry["rows"] = std::move(rows);
    }
    blocks.push_back(std::move(entry));
  }
  j["blocks"] = std::move(blocks);

  nlohmann::json constraints = nlohmann::json::array();
  const auto codomain = problem.map->codomain_sizes();
  const bool canonical = file.comments.size() > 1 && file.comments[1].find("coordinates") != std::string::npos;
  if (canonical) {
    int t = 1;
    for (std::size_t cb = 0; cb < codomain.size(); ++cb) {
      const Eigen::Index n = codomain[cb];
      for (Eigen::Index i = 0; i < n; ++i)
        constraints.push_back({{"constraint", t++}, {"target_block", cb}, {"row", i}, {"col", i}, {"part", "diag"}});
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = i + 1; k < n; ++k) {
          constraints.push_back({{"constraint", t++}, {"target_block", cb}, {"row", i}, {"col", k}, {"part", "re"}});
          constraints.push_back({{"constraint", t++}, {"target_block", cb}, {"row", i}, {"col", k}, {"part", "im"}});
        }
    }
    j["constraints"] = std::move(constraints);
  } else {
    j["constraints"] = "range basis of the constraint map; no per-entry labels";
  }

  const std::string sidecar = labels_path(path);
  std::ofstream out(sidecar);
  if (!out) throw std::runtime_error("cannot write " + sidecar);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + sidecar);
}

}  // namespace symext
