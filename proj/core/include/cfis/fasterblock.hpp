#pragma once

#include <cstdint>
#include <string>

#include "cfis/carafe.hpp"
#include "cfis/tensor.hpp"

namespace cfis {

enum class PConvPlacement { kFirstChannels, kLastChannels };

/// Partial convolution: a k x k conv over a contiguous c_p-channel slice,
/// identity on the remaining c - c_p channels.
struct PConvSpec {
  int c = 0;    // total channels
  int c_p = 0;  // convolved channels
  PConvPlacement placement = PConvPlacement::kFirstChannels;
  ConvSpec conv;  // c_p -> c_p, k x k

  double ratio() const { return static_cast<double>(c_p) / c; }
  int slice_first() const { return placement == PConvPlacement::kFirstChannels ? 0 : c - c_p; }
  void validate() const;
  static PConvSpec seeded(int c, int c_p, int kernel, Rng& rng);
};

/// PConv -> 1x1 expand (2x) -> ReLU -> 1x1 project, plus a residual from the
/// block input. Channel-preserving.
struct FasterBlockSpec {
  PConvSpec pconv;  // over c channels, k = 3 by default
  ConvSpec expand;  // 1x1: c -> 2c
  ConvSpec project;  // 1x1: 2c -> c

  int channels() const { return pconv.c; }
  void validate() const;
  static FasterBlockSpec seeded(int channels, Rng& rng);
};

/// C2f body with FasterBlock bottlenecks: 1x1 expand to 2*in channels, split
/// in halves, chain n blocks on the second half keeping every output, concat
/// (2 + n) * in channels, 1x1 compress to out channels.
struct C2fFnbSpec {
  int in_channels = 0;
  int out_channels = 0;
  ConvSpec expand;    // 1x1: in -> 2*in
  std::vector<FasterBlockSpec> blocks;  // each over `in` channels
  ConvSpec compress;  // 1x1: (2 + n) * in -> out

  int n_blocks() const { return static_cast<int>(blocks.size()); }
  int hidden() const { return in_channels; }
  void validate() const;
  static C2fFnbSpec seeded(int in_channels, int out_channels, int n_blocks, std::uint64_t seed);
};

Tensor pconv(const Tensor& x, const PConvSpec& spec);
Tensor faster_block(const Tensor& x, const FasterBlockSpec& spec);
Tensor c2f_fnb(const Tensor& x, const C2fFnbSpec& spec);

/// Multiply-accumulate counts from the closed-form conv cost h*w*k^2*cin*cout
/// (= h*w*k^2*c_p^2 for the partial slice).
std::uint64_t flops_pconv(int h, int w, int k, int c_p);
std::uint64_t flops_conv(int h, int w, int k, int c);

struct LayerCost {
  std::string name;
  std::uint64_t macs = 0;
  std::uint64_t weight_params = 0;
  std::uint64_t bias_params = 0;

  std::uint64_t params() const { return weight_params + bias_params; }
  std::uint64_t flops() const { return 2 * macs; }
};

struct CostReport {
  std::vector<LayerCost> layers;

  std::uint64_t total_macs() const;
  std::uint64_t total_flops() const { return 2 * total_macs(); }
  std::uint64_t total_params() const;
  void append(const CostReport& other, const std::string& prefix = "");
};

CostReport count_cost(const ConvSpec& spec, int h, int w, const std::string& name = "conv");
CostReport count_cost(const PConvSpec& spec, int h, int w, const std::string& name = "pconv");
CostReport count_cost(const FasterBlockSpec& spec, int h, int w,
                      const std::string& name = "faster_block");
CostReport count_cost(const C2fFnbSpec& spec, int h, int w);
CostReport count_cost(const CarafeConfig& cfg, int h, int w);

/// Analytic baseline: same expand/compress skeleton as c2f_fnb but with
/// standard two-conv (3x3) residual bottlenecks.
CostReport c2f_standard_cost(int in_channels, int out_channels, int n_blocks, int h, int w);

std::uint64_t count_params(const ConvSpec& spec);
std::uint64_t count_params(const C2fFnbSpec& spec);
std::uint64_t count_params(const CarafeConfig& cfg);

}  // namespace cfis
