#include "spdgeo/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace spdgeo {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

constexpr const char* kMmBanner = "%%MatrixMarket";

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

DenseSpd parse_dense_json(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("rows")) {
    throw ParseError("dense matrix JSON needs keys \"n\" and \"rows\"");
  }
  const auto& jn = doc["n"];
  const auto& rows = doc["rows"];
  if (!jn.is_number_integer() || jn.get<long long>() < 1 || !rows.is_array()) {
    throw ParseError("\"n\" must be a positive integer and \"rows\" an array");
  }
  const auto n = static_cast<Eigen::Index>(jn.get<long long>());
  if (static_cast<Eigen::Index>(rows.size()) != n) {
    throw ParseError("\"rows\" has " + std::to_string(rows.size()) + " rows, expected " +
                     std::to_string(n));
  }
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ParseError("row " + std::to_string(i) + " must be an array of length " +
                       std::to_string(n));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) {
        throw ParseError("non-numeric entry at (" + std::to_string(i) + ", " +
                         std::to_string(j) + ")");
      }
      a(i, j) = v.get<double>();
    }
  }
  return DenseSpd(a);
}

SparseSpd parse_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("empty Matrix Market file");
  }
  {
    std::istringstream hdr(line);
    std::string banner, object, format, field, symmetry;
    hdr >> banner >> object >> format >> field >> symmetry;
    if (banner != kMmBanner || lower(object) != "matrix" || lower(format) != "coordinate" ||
        lower(field) != "real" || lower(symmetry) != "symmetric") {
      throw ParseError("expected '%%MatrixMarket matrix coordinate real symmetric', got '" +
                       line + "'");
    }
  }
  // skip comments and blank lines
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%' &&
        line.find_first_not_of(" \t\r") != std::string::npos) {
      break;
    }
  }
  long long rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream sz(line);
    if (!(sz >> rows >> cols >> nnz) || rows < 1 || rows != cols || nnz < 0) {
      throw ParseError("invalid Matrix Market size line '" + line + "'");
    }
  }
  const auto n = static_cast<Eigen::Index>(rows);
  std::vector<Eigen::Triplet<double>> trips;
  SparsityPattern seen;
  for (long long k = 0; k < nnz; ++k) {
    long long i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v)) {
      throw ParseError("Matrix Market file ended after " + std::to_string(k) + " of " +
                       std::to_string(nnz) + " entries");
    }
    if (i < 1 || j < 1 || i > rows || j > cols) {
      throw ParseError("entry index out of range: " + std::to_string(i) + " " +
                       std::to_string(j));
    }
    --i;
    --j;
    if (i < j) std::swap(i, j);
    seen.emplace_back(i, j);
    trips.emplace_back(i, j, v);
    if (i != j) trips.emplace_back(j, i, v);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw ParseError("duplicate Matrix Market entry");
  }
  std::string rest;
  if (in >> rest) {
    throw ParseError("trailing data after " + std::to_string(nnz) + " entries");
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());
  return SparseSpd(std::move(a));
}

AnyMatrix parse_matrix(std::istream& in) {
  // Peek the first non-space characters for the MM banner.
  in >> std::ws;
  std::string head(14, '\0');
  const auto start = in.tellg();
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  head.resize(static_cast<std::size_t>(in.gcount()));
  in.clear();
  in.seekg(start);
  if (head.rfind("%%", 0) == 0) {
    return parse_matrix_market(in);
  }
  return parse_dense_json(in);
}

AnyMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  return parse_matrix(in);
}

void write_dense_json(const DenseSpd& m, std::ostream& out) {
  const Matrix& a = m.matrix();
  out << "{\"n\": " << a.rows() << ", \"rows\": [";
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    out << (i ? ", [" : "[");
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out << (j ? ", " : "") << format_full(a(i, j));
    }
    out << "]";
  }
  out << "]}\n";
}

void write_matrix_market(const SparseSpd& m, std::ostream& out) {
  const SparseMatrix& a = m.matrix();
  std::vector<std::string> lines;
  for (Eigen::Index i = 0; i < a.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) {
      if (it.col() <= it.row()) {
        lines.push_back(std::to_string(it.row() + 1) + " " + std::to_string(it.col() + 1) + " " +
                        format_full(it.value()));
      }
    }
  }
  out << kMmBanner << " matrix coordinate real symmetric\n";
  out << a.rows() << " " << a.cols() << " " << lines.size() << "\n";
  for (const auto& l : lines) out << l << "\n";
}

namespace {

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& w) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  w(out);
  out.flush();
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'");
  }
}

}  // namespace

void write_matrix(const DenseSpd& m, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& o) { write_dense_json(m, o); });
}

void write_matrix(const SparseSpd& m, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& o) { write_matrix_market(m, o); });
}

void write_matrix(const AnyMatrix& m, const std::filesystem::path& path) {
  std::visit([&](const auto& x) { write_matrix(x, path); }, m);
}

}  // namespace spdgeo
