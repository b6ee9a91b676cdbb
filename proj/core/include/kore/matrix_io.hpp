#pragma once

#include <filesystem>

#include "kore/matrix.hpp"

namespace kore {

/// Binary matrix container "KOREMAT1": 8-byte magic, little-endian u64
/// rows and cols, then rows*cols little-endian 64-bit floats row-major.
/// Round trips are bit-exact.
void save_matrix(const Matrix& m, const std::filesystem::path& path);

/// FormatError on bad magic, truncation, or trailing bytes.
Matrix load_matrix(const std::filesystem::path& path);

}  // namespace kore
