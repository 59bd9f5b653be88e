#include "cfis/carafe.hpp"

#include <string>

namespace cfis {

void CarafeConfig::validate() const {
  if (scale < 1) {
    throw ConfigError("carafe: scale must be >= 1");
  }
  if (k_up < 3 || k_up % 2 == 0) {
    throw ConfigError("carafe: k_up must be odd and >= 3, got " + std::to_string(k_up));
  }
  if (c_m < 1) {
    throw ConfigError("carafe: c_m must be >= 1");
  }
  compress.validate();
  encoder.validate();
  if (compress.kernel != 1 || compress.out_channels != c_m) {
    throw ConfigError("carafe: compression must be a 1x1 conv onto c_m channels");
  }
  if (encoder.kernel != k_encoder()) {
    throw ConfigError("carafe: encoder kernel must be k_up - 2 = " +
                      std::to_string(k_encoder()));
  }
  if (encoder.in_channels != c_m || encoder.out_channels != c_up()) {
    throw ConfigError("carafe: encoder must map c_m -> scale^2 * k_up^2 channels");
  }
}

CarafeConfig CarafeConfig::seeded(int in_channels, int scale, int k_up, int c_m,
                                  std::uint64_t seed) {
  CarafeConfig cfg;
  cfg.scale = scale;
  cfg.k_up = k_up;
  cfg.c_m = c_m;
  Rng rng(seed);
  cfg.compress = make_conv(in_channels, c_m, 1, rng);
  cfg.encoder = make_conv(c_m, cfg.c_up(), cfg.k_encoder(), rng);
  cfg.validate();
  return cfg;
}

ReassemblyKernelField::ReassemblyKernelField(int batch, int out_h, int out_w, int k_up)
    : batch_(batch), out_h_(out_h), out_w_(out_w), k_up_(k_up) {
  if (batch < 1 || out_h < 1 || out_w < 1 || k_up < 1) {
    throw ConfigError("kernel field dims must all be >= 1");
  }
  w_.assign(static_cast<std::size_t>(batch) * out_h * out_w * k_up * k_up, 0.0f);
}

ReassemblyKernelField ReassemblyKernelField::one_hot_center(int batch, int out_h, int out_w,
                                                            int k_up) {
  ReassemblyKernelField field(batch, out_h, out_w, k_up);
  const int c = k_up / 2;
  for (int b = 0; b < batch; ++b) {
    for (int oy = 0; oy < out_h; ++oy) {
      for (int ox = 0; ox < out_w; ++ox) {
        field.at(b, oy, ox, c, c) = 1.0f;
      }
    }
  }
  return field;
}

ReassemblyKernelField predict_kernels(const Tensor& x, const CarafeConfig& cfg) {
  cfg.validate();
  if (x.channels() != cfg.in_channels()) {
    throw ConfigError("predict_kernels: input has " + std::to_string(x.channels()) +
                      " channels, config expects " + std::to_string(cfg.in_channels()));
  }
  const int B = x.batch(), H = x.height(), W = x.width();
  const int s = cfg.scale, k = cfg.k_up, k2 = k * k;

  const Tensor compressed = conv2d(x, cfg.compress);
  const Tensor logits = conv2d(compressed, cfg.encoder);
  const Tensor normalized = softmax_group(logits, k2);

  // Pixel shuffle: encoder channel group g = su*s + sv holds the kernel for
  // output sub-position (su, sv) of the block rooted at (u, v).
  ReassemblyKernelField field(B, H * s, W * s, k);
  for (int b = 0; b < B; ++b) {
    for (int oy = 0; oy < H * s; ++oy) {
      const int u = oy / s, su = oy % s;
      for (int ox = 0; ox < W * s; ++ox) {
        const int v = ox / s, sv = ox % s;
        const int g = su * s + sv;
        for (int t = 0; t < k2; ++t) {
          field.at(b, oy, ox, t / k, t % k) = normalized.at(b, g * k2 + t, u, v);
        }
      }
    }
  }
  return field;
}

Tensor reassemble(const Tensor& x, const ReassemblyKernelField& kernels,
                  const CarafeConfig& cfg) {
  cfg.validate();
  const int B = x.batch(), C = x.channels(), H = x.height(), W = x.width();
  const int s = cfg.scale, k = cfg.k_up, r = cfg.radius();
  if (kernels.batch() != B || kernels.out_h() != H * s || kernels.out_w() != W * s ||
      kernels.k_up() != k) {
    throw ConfigError("reassemble: kernel field does not match input shape and config");
  }
  Tensor out(B, C, H * s, W * s);
  for (int b = 0; b < B; ++b) {
    for (int c = 0; c < C; ++c) {
      for (int oy = 0; oy < H * s; ++oy) {
        const int u = oy / s;
        for (int ox = 0; ox < W * s; ++ox) {
          const int v = ox / s;
          float acc = 0.0f;
          for (int n = -r; n <= r; ++n) {
            const int yy = u + n;
            if (yy < 0 || yy >= H) continue;
            for (int m = -r; m <= r; ++m) {
              const int xx = v + m;
              if (xx < 0 || xx >= W) continue;
              acc += kernels.at(b, oy, ox, n + r, m + r) * x.at(b, c, yy, xx);
            }
          }
          out.at(b, c, oy, ox) = acc;
        }
      }
    }
  }
  return out;
}

Tensor carafe_upsample(const Tensor& x, const CarafeConfig& cfg) {
  return reassemble(x, predict_kernels(x, cfg), cfg);
}

}  // namespace cfis
