#pragma once

#include "spdgeo/core.hpp"

#include <filesystem>
#include <iosfwd>
#include <variant>

namespace spdgeo {

using AnyMatrix = std::variant<DenseSpd, SparseSpd>;

// Dense files are JSON: {"n": <int>, "rows": [[...], ...]}, 17 significant
// digits. Sparse files are Matrix Market "coordinate real symmetric" with the
// lower triangle on disk. The reader dispatches on the "%%MatrixMarket" banner.

AnyMatrix read_matrix(const std::filesystem::path& path);
AnyMatrix parse_matrix(std::istream& in);

DenseSpd parse_dense_json(std::istream& in);
SparseSpd parse_matrix_market(std::istream& in);

void write_matrix(const DenseSpd& m, const std::filesystem::path& path);
void write_matrix(const SparseSpd& m, const std::filesystem::path& path);
void write_matrix(const AnyMatrix& m, const std::filesystem::path& path);

void write_dense_json(const DenseSpd& m, std::ostream& out);
void write_matrix_market(const SparseSpd& m, std::ostream& out);

/// "%.17g"
std::string format_full(double v);

}  // namespace spdgeo
