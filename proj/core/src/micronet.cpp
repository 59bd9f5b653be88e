#include "cfis/micronet.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "cfis/tensor_io.hpp"

namespace cfis {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Tensor upsample2x(const Tensor& x, const MicroNetSpec& spec) {
  switch (spec.params.upsample) {
    case UpsampleMode::kNearest:
      return nearest_upsample(x, 2);
    case UpsampleMode::kCarafe:
      return carafe_upsample(x, spec.carafe);
    case UpsampleMode::kCarafeOneHot:
      return reassemble(x,
                        ReassemblyKernelField::one_hot_center(
                            x.batch(), x.height() * 2, x.width() * 2, spec.carafe.k_up),
                        spec.carafe);
  }
  throw ConfigError("micronet: unknown upsample mode");
}

void save_conv(const ConvSpec& spec, const std::filesystem::path& dir, const std::string& name) {
  write_tnsr_file(
      (dir / (name + ".weight.tnsr")).string(),
      Tensor::from_data({spec.out_channels, spec.in_channels, spec.kernel, spec.kernel},
                        spec.weights));
  write_tnsr_file((dir / (name + ".bias.tnsr")).string(),
                  Tensor::from_data({1, spec.out_channels, 1, 1}, spec.bias));
}

void load_conv(ConvSpec& spec, const std::filesystem::path& dir, const std::string& name) {
  const Tensor w = read_tnsr_file((dir / (name + ".weight.tnsr")).string());
  const Shape want{spec.out_channels, spec.in_channels, spec.kernel, spec.kernel};
  if (!(w.shape() == want)) {
    throw DataError(name + ".weight.tnsr: shape does not match the layer");
  }
  const Tensor b = read_tnsr_file((dir / (name + ".bias.tnsr")).string());
  if (!(b.shape() == Shape{1, spec.out_channels, 1, 1})) {
    throw DataError(name + ".bias.tnsr: shape does not match the layer");
  }
  spec.weights = w.values();
  spec.bias = b.values();
}

template <class Fn>
void for_each_conv(MicroNetSpec& spec, Fn&& fn) {
  fn(spec.stem, "stem");
  fn(spec.down1, "down1");
  for (auto [stage, tag] : {std::pair{&spec.stage1, "stage1"}, {&spec.stage2, "stage2"}}) {
    const std::string p(tag);
    fn(stage->expand, p + ".expand");
    for (int i = 0; i < stage->n_blocks(); ++i) {
      const std::string b = p + ".block" + std::to_string(i);
      fn(stage->blocks[i].pconv.conv, b + ".pconv");
      fn(stage->blocks[i].expand, b + ".expand");
      fn(stage->blocks[i].project, b + ".project");
    }
    fn(stage->compress, p + ".compress");
  }
  fn(spec.down2, "down2");
  fn(spec.carafe.compress, "carafe.compress");
  fn(spec.carafe.encoder, "carafe.encoder");
  fn(spec.head, "head");
}

}  // namespace

void MicroNetSpec::validate() const {
  const auto& p = params;
  if (p.input_h % 4 != 0 || p.input_w % 4 != 0) {
    throw ConfigError("micronet: nominal input dims must be divisible by 4");
  }
  if (p.n_classes < 1) {
    throw ConfigError("micronet: need at least one class");
  }
  stem.validate();
  down1.validate();
  stage1.validate();
  down2.validate();
  stage2.validate();
  carafe.validate();
  head.validate();
  if (stem.in_channels != p.in_channels || stem.out_channels != p.stem_channels ||
      down1.in_channels != p.stem_channels || down1.out_channels != p.stage1_channels ||
      stage1.in_channels != p.stage1_channels || stage1.out_channels != p.stage1_channels ||
      down2.in_channels != p.stage1_channels || down2.out_channels != p.stage2_channels ||
      stage2.in_channels != p.stage2_channels || stage2.out_channels != p.stage2_channels) {
    throw ConfigError("micronet: stage channel counts are inconsistent");
  }
  if (carafe.scale != 2 || carafe.in_channels() != p.stage2_channels) {
    throw ConfigError("micronet: upsampler must map stage2 channels at scale 2");
  }
  if (head.kernel != 1 ||
      head.in_channels != p.stage1_channels + p.stage2_channels ||
      head.out_channels != head_channels()) {
    throw ConfigError("micronet: head must be a 1x1 conv onto 5 + n channels");
  }
}

MicroNetSpec MicroNetSpec::seeded(const MicroNetParams& params, std::uint64_t seed) {
  Rng rng(seed);
  MicroNetSpec spec;
  spec.params = params;
  spec.stem = make_conv(params.in_channels, params.stem_channels, 3, rng);
  spec.down1 = make_conv(params.stem_channels, params.stage1_channels, 3, rng);
  spec.stage1 = C2fFnbSpec::seeded(params.stage1_channels, params.stage1_channels,
                                   params.n_blocks, rng.next_u64());
  spec.down2 = make_conv(params.stage1_channels, params.stage2_channels, 3, rng);
  spec.stage2 = C2fFnbSpec::seeded(params.stage2_channels, params.stage2_channels,
                                   params.n_blocks, rng.next_u64());
  spec.carafe =
      CarafeConfig::seeded(params.stage2_channels, 2, params.k_up, params.c_m, rng.next_u64());
  spec.head = make_conv(params.stage1_channels + params.stage2_channels,
                        5 + params.n_classes, 1, rng);
  spec.validate();
  return spec;
}

Tensor forward(const Tensor& x, const MicroNetSpec& spec) {
  spec.validate();
  if (x.channels() != spec.params.in_channels) {
    throw ConfigError("micronet: input has " + std::to_string(x.channels()) +
                      " channels, spec expects " + std::to_string(spec.params.in_channels));
  }
  if (x.height() % 4 != 0 || x.width() % 4 != 0) {
    throw ConfigError("micronet: input spatial dims must be divisible by 4");
  }
  Tensor t = relu(conv2d(x, spec.stem));
  t = avg_pool2(relu(conv2d(t, spec.down1)));
  const Tensor p1 = c2f_fnb(t, spec.stage1);  // H/2
  t = avg_pool2(relu(conv2d(p1, spec.down2)));
  const Tensor p2 = c2f_fnb(t, spec.stage2);  // H/4
  const Tensor fused = concat_channels({p1, upsample2x(p2, spec)});
  return conv2d(avg_pool2(fused), spec.head);
}

std::vector<Detection> decode(const Tensor& head, double conf_threshold,
                              const std::string& image_id) {
  if (head.batch() != 1 || head.channels() < 6) {
    throw ConfigError("decode: expected a single-image head with 4+1+n channels");
  }
  const int n_classes = head.channels() - 5;
  const int gh = head.height(), gw = head.width();
  std::vector<Detection> out;
  for (int i = 0; i < gh; ++i) {
    for (int j = 0; j < gw; ++j) {
      const double conf = sigmoid(head.at(0, 4, i, j));
      if (!(conf > conf_threshold)) continue;
      int best_cls = 0;
      double best_score = sigmoid(head.at(0, 5, i, j));
      for (int c = 1; c < n_classes; ++c) {
        const double s = sigmoid(head.at(0, 5 + c, i, j));
        if (s > best_score) {
          best_score = s;
          best_cls = c;
        }
      }
      const double cx = (j + sigmoid(head.at(0, 0, i, j))) / gw;
      const double cy = (i + sigmoid(head.at(0, 1, i, j))) / gh;
      // Size logits are clamped so any finite head decodes to a finite box.
      const double tw = std::clamp<double>(head.at(0, 2, i, j), -30.0, 30.0);
      const double th = std::clamp<double>(head.at(0, 3, i, j), -30.0, 30.0);
      out.push_back({image_id, best_cls, conf, BBox(cx, cy, std::exp(tw) / gw, std::exp(th) / gh)});
    }
  }
  return out;
}

CostReport end_to_end_cost(const MicroNetSpec& spec, BlockKind blocks) {
  spec.validate();
  const auto& p = spec.params;
  const int h = p.input_h, w = p.input_w;
  const int h2 = h / 2, w2 = w / 2, h4 = h / 4, w4 = w / 4;
  CostReport report;
  report.append(count_cost(spec.stem, h, w, "stem"));
  report.append(count_cost(spec.down1, h, w, "down1"));
  if (blocks == BlockKind::kFasterNet) {
    report.append(count_cost(spec.stage1, h2, w2), "stage1");
    report.append(count_cost(spec.stage2, h4, w4), "stage2");
  } else {
    report.append(c2f_standard_cost(p.stage1_channels, p.stage1_channels, p.n_blocks, h2, w2),
                  "stage1");
    report.append(c2f_standard_cost(p.stage2_channels, p.stage2_channels, p.n_blocks, h4, w4),
                  "stage2");
  }
  report.append(count_cost(spec.down2, h2, w2, "down2"));
  if (p.upsample == UpsampleMode::kNearest) {
    report.layers.push_back({"upsample.nearest", 0, 0, 0});
  } else {
    report.append(count_cost(spec.carafe, h4, w4), "upsample");
  }
  report.append(count_cost(spec.head, h4, w4, "head"));
  return report;
}

void save_weights(const MicroNetSpec& spec, const std::string& dir) {
  std::filesystem::create_directories(dir);
  MicroNetSpec copy = spec;  // for_each_conv takes mutable refs
  for_each_conv(copy, [&](ConvSpec& conv, const std::string& name) {
    save_conv(conv, dir, name);
  });
}

void load_weights(MicroNetSpec& spec, const std::string& dir) {
  for_each_conv(spec, [&](ConvSpec& conv, const std::string& name) {
    load_conv(conv, dir, name);
  });
  spec.validate();
}

}  // namespace cfis
