#include "kore/matrix_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace kore {

namespace {

constexpr char kMagic[8] = {'K', 'O', 'R', 'E', 'M', 'A', 'T', '1'};

void put_u64_le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64_le(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

void save_matrix(const Matrix& m, const std::filesystem::path& path) {
  std::string buf;
  buf.reserve(24 + 8 * m.size());
  buf.append(kMagic, sizeof(kMagic));
  put_u64_le(buf, m.rows());
  put_u64_le(buf, m.cols());
  for (double v : m.data()) {
    put_u64_le(buf, std::bit_cast<std::uint64_t>(v));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error("write failed: " + path.string());
}

Matrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open for reading: " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 24) throw FormatError("KOREMAT1: file truncated: " + path.string());
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("KOREMAT1: bad magic: " + path.string());
  }
  const std::uint64_t rows = get_u64_le(bytes.data() + 8);
  const std::uint64_t cols = get_u64_le(bytes.data() + 16);
  const std::uint64_t count = rows * cols;
  if (cols != 0 && count / cols != rows) {
    throw FormatError("KOREMAT1: dimension overflow: " + path.string());
  }
  if (bytes.size() != 24 + 8 * count) {
    throw FormatError("KOREMAT1: payload size mismatch: " + path.string());
  }
  std::vector<double> data(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    data[i] = std::bit_cast<double>(get_u64_le(bytes.data() + 24 + 8 * i));
  }
  return Matrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
                std::move(data));
}

}  // namespace kore
