#pragma once

#include <iosfwd>
#include <string>

#include "cfis/tensor.hpp"

namespace cfis {

// TNSR1 file format: one ASCII header line
//   TNSR1 <batch> <channels> <height> <width>\n
// followed by batch*channels*height*width little-endian 32-bit floats in
// row-major NCHW order.

Tensor read_tnsr(std::istream& in, const std::string& origin = "<stream>");
Tensor read_tnsr_file(const std::string& path);

void write_tnsr(std::ostream& out, const Tensor& t);
void write_tnsr_file(const std::string& path, const Tensor& t);

}  // namespace cfis
