#include "cfis/fasterblock.hpp"

#include <numeric>

namespace cfis {

void PConvSpec::validate() const {
  if (c < 1 || c_p < 1 || c_p > c) {
    throw ConfigError("pconv: need 1 <= c_p <= c, got c_p=" + std::to_string(c_p) +
                      " c=" + std::to_string(c));
  }
  conv.validate();
  if (conv.in_channels != c_p || conv.out_channels != c_p) {
    throw ConfigError("pconv: slice conv must map c_p -> c_p channels");
  }
}

PConvSpec PConvSpec::seeded(int c, int c_p, int kernel, Rng& rng) {
  PConvSpec spec;
  spec.c = c;
  spec.c_p = c_p;
  spec.conv = make_conv(c_p, c_p, kernel, rng);
  spec.validate();
  return spec;
}

void FasterBlockSpec::validate() const {
  pconv.validate();
  expand.validate();
  project.validate();
  const int c = pconv.c;
  if (expand.kernel != 1 || project.kernel != 1) {
    throw ConfigError("faster_block: expand/project must be 1x1 convs");
  }
  if (expand.in_channels != c || expand.out_channels != 2 * c) {
    throw ConfigError("faster_block: expand must map c -> 2c channels");
  }
  if (project.in_channels != 2 * c || project.out_channels != c) {
    throw ConfigError("faster_block: project must map 2c -> c channels");
  }
}

FasterBlockSpec FasterBlockSpec::seeded(int channels, Rng& rng) {
  FasterBlockSpec spec;
  const int c_p = std::max(1, channels / 4);
  spec.pconv = PConvSpec::seeded(channels, c_p, 3, rng);
  spec.expand = make_conv(channels, 2 * channels, 1, rng);
  spec.project = make_conv(2 * channels, channels, 1, rng);
  spec.validate();
  return spec;
}

void C2fFnbSpec::validate() const {
  if (in_channels < 1 || out_channels < 1) {
    throw ConfigError("c2f_fnb: channel counts must be >= 1");
  }
  expand.validate();
  compress.validate();
  if (expand.kernel != 1 || compress.kernel != 1) {
    throw ConfigError("c2f_fnb: expand/compress must be 1x1 convs");
  }
  if (expand.in_channels != in_channels) {
    throw ConfigError("c2f_fnb: expand input channels do not match in_channels");
  }
  if (expand.out_channels % 2 != 0) {
    throw ConfigError("c2f_fnb: expanded channel count must be even");
  }
  if (expand.out_channels != 2 * in_channels) {
    throw ConfigError("c2f_fnb: expand must double the input channels");
  }
  for (const auto& b : blocks) {
    b.validate();
    if (b.channels() != hidden()) {
      throw ConfigError("c2f_fnb: every block must run on the split half width");
    }
  }
  if (compress.in_channels != (2 + n_blocks()) * hidden()) {
    throw ConfigError("c2f_fnb: compress input must be (2 + n_blocks) * hidden channels");
  }
  if (compress.out_channels != out_channels) {
    throw ConfigError("c2f_fnb: compress output channels do not match out_channels");
  }
}

C2fFnbSpec C2fFnbSpec::seeded(int in_channels, int out_channels, int n_blocks,
                              std::uint64_t seed) {
  Rng rng(seed);
  C2fFnbSpec spec;
  spec.in_channels = in_channels;
  spec.out_channels = out_channels;
  spec.expand = make_conv(in_channels, 2 * in_channels, 1, rng);
  for (int i = 0; i < n_blocks; ++i) {
    spec.blocks.push_back(FasterBlockSpec::seeded(in_channels, rng));
  }
  spec.compress = make_conv((2 + n_blocks) * in_channels, out_channels, 1, rng);
  spec.validate();
  return spec;
}

Tensor pconv(const Tensor& x, const PConvSpec& spec) {
  spec.validate();
  if (x.channels() != spec.c) {
    throw ConfigError("pconv: input has " + std::to_string(x.channels()) +
                      " channels, spec expects " + std::to_string(spec.c));
  }
  Tensor out = x;  // untouched channels are copied bit-exactly
  const int first = spec.slice_first();
  const Tensor slice = slice_channels(x, first, spec.c_p);
  const Tensor conved = conv2d(slice, spec.conv);
  const std::size_t plane = static_cast<std::size_t>(x.height()) * x.width();
  for (int b = 0; b < x.batch(); ++b) {
    for (int c = 0; c < spec.c_p; ++c) {
      const float* src = conved.data() + conved.index(b, c, 0, 0);
      std::copy(src, src + plane, out.data() + out.index(b, first + c, 0, 0));
    }
  }
  return out;
}

Tensor faster_block(const Tensor& x, const FasterBlockSpec& spec) {
  spec.validate();
  Tensor t = pconv(x, spec.pconv);
  t = conv2d(t, spec.expand);
  t = relu(t);
  t = conv2d(t, spec.project);
  return add(t, x);
}

Tensor c2f_fnb(const Tensor& x, const C2fFnbSpec& spec) {
  spec.validate();
  if (x.channels() != spec.in_channels) {
    throw ConfigError("c2f_fnb: input has " + std::to_string(x.channels()) +
                      " channels, spec expects " + std::to_string(spec.in_channels));
  }
  const Tensor expanded = conv2d(x, spec.expand);
  const int h = spec.hidden();
  std::vector<Tensor> parts;
  parts.reserve(2 + spec.n_blocks());
  parts.push_back(slice_channels(expanded, 0, h));
  parts.push_back(slice_channels(expanded, h, h));
  for (const auto& block : spec.blocks) {
    parts.push_back(faster_block(parts.back(), block));
  }
  return conv2d(concat_channels(parts), spec.compress);
}

std::uint64_t flops_pconv(int h, int w, int k, int c_p) {
  return static_cast<std::uint64_t>(h) * w * k * k * c_p * c_p;
}

std::uint64_t flops_conv(int h, int w, int k, int c) {
  return static_cast<std::uint64_t>(h) * w * k * k * c * c;
}

std::uint64_t CostReport::total_macs() const {
  return std::accumulate(layers.begin(), layers.end(), std::uint64_t{0},
                         [](std::uint64_t acc, const LayerCost& l) { return acc + l.macs; });
}

std::uint64_t CostReport::total_params() const {
  return std::accumulate(layers.begin(), layers.end(), std::uint64_t{0},
                         [](std::uint64_t acc, const LayerCost& l) { return acc + l.params(); });
}

void CostReport::append(const CostReport& other, const std::string& prefix) {
  for (LayerCost l : other.layers) {
    l.name = prefix.empty() ? l.name : prefix + "." + l.name;
    layers.push_back(std::move(l));
  }
}

CostReport count_cost(const ConvSpec& spec, int h, int w, const std::string& name) {
  LayerCost l;
  l.name = name;
  l.macs = static_cast<std::uint64_t>(h) * w * spec.kernel * spec.kernel * spec.in_channels *
           spec.out_channels;
  l.weight_params = spec.weights.size();
  l.bias_params = spec.bias.size();
  return CostReport{{l}};
}

CostReport count_cost(const PConvSpec& spec, int h, int w, const std::string& name) {
  LayerCost l;
  l.name = name;
  l.macs = flops_pconv(h, w, spec.conv.kernel, spec.c_p);
  l.weight_params = spec.conv.weights.size();
  l.bias_params = spec.conv.bias.size();
  return CostReport{{l}};
}

CostReport count_cost(const FasterBlockSpec& spec, int h, int w, const std::string& name) {
  CostReport report;
  report.append(count_cost(spec.pconv, h, w, "pconv"), name);
  report.append(count_cost(spec.expand, h, w, "expand"), name);
  report.append(count_cost(spec.project, h, w, "project"), name);
  return report;
}

CostReport count_cost(const C2fFnbSpec& spec, int h, int w) {
  CostReport report;
  report.append(count_cost(spec.expand, h, w, "expand"), "c2f_fnb");
  for (int i = 0; i < spec.n_blocks(); ++i) {
    report.append(count_cost(spec.blocks[i], h, w, "block" + std::to_string(i)), "c2f_fnb");
  }
  report.append(count_cost(spec.compress, h, w, "compress"), "c2f_fnb");
  return report;
}

CostReport count_cost(const CarafeConfig& cfg, int h, int w) {
  CostReport report;
  report.append(count_cost(cfg.compress, h, w, "compress"), "carafe");
  report.append(count_cost(cfg.encoder, h, w, "encoder"), "carafe");
  LayerCost reasm;
  reasm.name = "carafe.reassemble";
  reasm.macs = static_cast<std::uint64_t>(cfg.scale) * cfg.scale * h * w * cfg.k_up * cfg.k_up *
               cfg.in_channels();
  report.layers.push_back(reasm);
  return report;
}

CostReport c2f_standard_cost(int in_channels, int out_channels, int n_blocks, int h, int w) {
  auto conv_layer = [&](const std::string& name, int cin, int cout, int k) {
    LayerCost l;
    l.name = name;
    l.macs = static_cast<std::uint64_t>(h) * w * k * k * cin * cout;
    l.weight_params = static_cast<std::uint64_t>(cout) * cin * k * k;
    l.bias_params = static_cast<std::uint64_t>(cout);
    return l;
  };
  const int hid = in_channels;
  CostReport report;
  report.layers.push_back(conv_layer("c2f_std.expand", in_channels, 2 * in_channels, 1));
  for (int i = 0; i < n_blocks; ++i) {
    const std::string b = "c2f_std.block" + std::to_string(i);
    report.layers.push_back(conv_layer(b + ".conv1", hid, hid, 3));
    report.layers.push_back(conv_layer(b + ".conv2", hid, hid, 3));
  }
  report.layers.push_back(
      conv_layer("c2f_std.compress", (2 + n_blocks) * hid, out_channels, 1));
  return report;
}

std::uint64_t count_params(const ConvSpec& spec) { return count_cost(spec, 1, 1).total_params(); }

std::uint64_t count_params(const C2fFnbSpec& spec) {
  return count_cost(spec, 1, 1).total_params();
}

std::uint64_t count_params(const CarafeConfig& cfg) { return count_cost(cfg, 1, 1).total_params(); }

}  // namespace cfis
