#include "cfis/tensor_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace cfis {

namespace {

void put_le32(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

std::uint32_t get_le32(const unsigned char* b) {
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

Tensor read_tnsr(std::istream& in, const std::string& origin) {
  std::string header;
  if (!std::getline(in, header)) {
    throw DataError(origin + ": missing TNSR1 header");
  }
  std::istringstream hs(header);
  std::string magic;
  Shape shape;
  if (!(hs >> magic >> shape.batch >> shape.channels >> shape.height >> shape.width) ||
      magic != "TNSR1") {
    throw DataError(origin + ": bad TNSR1 header: \"" + header + "\"");
  }
  if (shape.batch < 1 || shape.channels < 1 || shape.height < 1 || shape.width < 1) {
    throw DataError(origin + ": TNSR1 dims must all be >= 1");
  }
  const std::size_t n = shape.elements();
  std::vector<unsigned char> raw(n * 4);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
    throw DataError(origin + ": truncated TNSR1 payload, expected " + std::to_string(n) +
                    " floats");
  }
  std::vector<float> data(n);
  for (std::size_t i = 0; i < n; ++i) {
    data[i] = std::bit_cast<float>(get_le32(raw.data() + i * 4));
    if (!std::isfinite(data[i])) {
      throw DataError(origin + ": non-finite value at element " + std::to_string(i));
    }
  }
  return Tensor::from_data(shape, std::move(data));
}

Tensor read_tnsr_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError(path + ": cannot open");
  }
  return read_tnsr(in, path);
}

void write_tnsr(std::ostream& out, const Tensor& t) {
  out << "TNSR1 " << t.batch() << ' ' << t.channels() << ' ' << t.height() << ' ' << t.width()
      << '\n';
  for (std::size_t i = 0; i < t.size(); ++i) {
    put_le32(out, std::bit_cast<std::uint32_t>(t.data()[i]));
  }
}

void write_tnsr_file(const std::string& path, const Tensor& t) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError(path + ": cannot open for writing");
  }
  write_tnsr(out, t);
  if (!out) {
    throw DataError(path + ": write failed");
  }
}

}  // namespace cfis
