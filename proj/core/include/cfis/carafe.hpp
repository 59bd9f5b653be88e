#pragma once

#include <cstdint>

#include "cfis/tensor.hpp"

namespace cfis {

/// Content-aware upsampler configuration. The encoder kernel is tied to the
/// reassembly kernel: k_encoder = k_up - 2, and the encoder emits
/// scale^2 * k_up^2 channels, one k_up x k_up kernel per output sub-position.
struct CarafeConfig {
  int scale = 2;    // integer upscale factor
  int k_up = 5;     // reassembly kernel size, odd, >= 3
  int c_m = 64;     // compressed channel count
  ConvSpec compress;  // 1x1: in_channels -> c_m
  ConvSpec encoder;   // k_encoder x k_encoder: c_m -> c_up()

  int k_encoder() const { return k_up - 2; }
  int c_up() const { return scale * scale * k_up * k_up; }
  int radius() const { return k_up / 2; }
  int in_channels() const { return compress.in_channels; }

  void validate() const;
  static CarafeConfig seeded(int in_channels, int scale, int k_up, int c_m, std::uint64_t seed);
};

/// One normalized k_up x k_up kernel per output location, shared across
/// channels. Entries are non-negative and sum to 1 per location.
class ReassemblyKernelField {
 public:
  ReassemblyKernelField(int batch, int out_h, int out_w, int k_up);

  int batch() const { return batch_; }
  int out_h() const { return out_h_; }
  int out_w() const { return out_w_; }
  int k_up() const { return k_up_; }

  float at(int b, int oy, int ox, int ky, int kx) const { return w_[index(b, oy, ox, ky, kx)]; }
  float& at(int b, int oy, int ox, int ky, int kx) { return w_[index(b, oy, ox, ky, kx)]; }

  /// Exact one-hot kernels (1.0 at the center tap): reassembly degenerates
  /// to nearest-neighbor upsampling.
  static ReassemblyKernelField one_hot_center(int batch, int out_h, int out_w, int k_up);

 private:
  std::size_t index(int b, int oy, int ox, int ky, int kx) const {
    return (((static_cast<std::size_t>(b) * out_h_ + oy) * out_w_ + ox) * k_up_ + ky) * k_up_ +
           kx;
  }
  int batch_, out_h_, out_w_, k_up_;
  std::vector<float> w_;
};

/// Kernel prediction: channel compression (1x1), content encoding
/// (k_encoder conv), per-kernel softmax, pixel shuffle of the
/// scale^2 * k_up^2 encoder channels onto output locations.
ReassemblyKernelField predict_kernels(const Tensor& x, const CarafeConfig& cfg);

/// Weighted reassembly of the k_up neighborhood around the source location
/// u = floor(u'/scale), v = floor(v'/scale); out-of-range taps contribute 0.
Tensor reassemble(const Tensor& x, const ReassemblyKernelField& kernels,
                  const CarafeConfig& cfg);

Tensor carafe_upsample(const Tensor& x, const CarafeConfig& cfg);

}  // namespace cfis
