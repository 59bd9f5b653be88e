#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfis/carafe.hpp"
#include "cfis/evalkit.hpp"
#include "cfis/fasterblock.hpp"
#include "cfis/tensor.hpp"

namespace cfis {

enum class UpsampleMode { kNearest, kCarafe, kCarafeOneHot };

enum class BlockKind { kFasterNet, kStandardBottleneck };

struct MicroNetParams {
  int in_channels = 3;
  int n_classes = 7;
  int stem_channels = 8;
  int stage1_channels = 16;
  int stage2_channels = 32;
  int n_blocks = 1;
  int k_up = 5;
  int c_m = 16;
  int input_h = 32;  // nominal dims, used by the cost accountant
  int input_w = 32;
  UpsampleMode upsample = UpsampleMode::kNearest;
};

/// Two-level pyramid: stem, two downsampling stages (3x3 conv + 2x average
/// pool) each followed by a C2f_FNB block, a selectable 2x upsampler fusing
/// the deep level back onto the shallow one by concat, and a 1x1 head
/// emitting 4 box + 1 confidence + n class channels per cell at 1/4 input
/// resolution.
struct MicroNetSpec {
  MicroNetParams params;
  ConvSpec stem;    // 3x3: in -> stem
  ConvSpec down1;   // 3x3: stem -> s1, then pool
  C2fFnbSpec stage1;  // s1 -> s1
  ConvSpec down2;   // 3x3: s1 -> s2, then pool
  C2fFnbSpec stage2;  // s2 -> s2
  CarafeConfig carafe;  // s2 channels, scale 2
  ConvSpec head;    // 1x1: s1 + s2 -> 5 + n

  int head_channels() const { return 5 + params.n_classes; }
  void validate() const;
  static MicroNetSpec seeded(const MicroNetParams& params, std::uint64_t seed);
};

/// Raw head tensor of shape (batch, 5 + n, H/4, W/4). Input spatial dims
/// must be divisible by 4.
Tensor forward(const Tensor& x, const MicroNetSpec& spec);

/// Per-cell decode: sigmoid confidence/class channels, sigmoid cell-offset
/// centers, exponential sizes scaled by the cell size. Emits cells whose
/// confidence is strictly above the threshold; no NMS is applied.
std::vector<Detection> decode(const Tensor& head, double conf_threshold,
                              const std::string& image_id = "");

/// Layer-by-layer cost at the spec's nominal input dims. `blocks` selects
/// the C2f bottleneck kind for the two stages so block swaps can be
/// compared analytically.
CostReport end_to_end_cost(const MicroNetSpec& spec,
                           BlockKind blocks = BlockKind::kFasterNet);

/// TNSR1-per-layer weight directory: <name>.weight.tnsr holds (out, in, k,
/// k) kernels, <name>.bias.tnsr holds (1, out, 1, 1).
void save_weights(const MicroNetSpec& spec, const std::string& dir);
void load_weights(MicroNetSpec& spec, const std::string& dir);

}  // namespace cfis
