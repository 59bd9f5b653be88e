#include "cfis/tensor.hpp"

#include <cmath>
#include <string>

namespace cfis {

namespace {

void check_shape(const Shape& s) {
  if (s.batch < 1 || s.channels < 1 || s.height < 1 || s.width < 1) {
    throw ConfigError("tensor dims must all be >= 1, got " + std::to_string(s.batch) + "x" +
                      std::to_string(s.channels) + "x" + std::to_string(s.height) + "x" +
                      std::to_string(s.width));
  }
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!(a.shape() == b.shape())) {
    throw ConfigError(std::string(op) + ": shape mismatch");
  }
}

}  // namespace

Tensor::Tensor(Shape shape) : shape_(shape) {
  check_shape(shape_);
  data_.assign(shape_.elements(), 0.0f);
}

Tensor Tensor::from_data(Shape shape, std::vector<float> data) {
  check_shape(shape);
  if (data.size() != shape.elements()) {
    throw ConfigError("tensor data length " + std::to_string(data.size()) +
                      " does not match shape (" + std::to_string(shape.elements()) +
                      " elements)");
  }
  for (float v : data) {
    if (!std::isfinite(v)) {
      throw ConfigError("tensor data contains non-finite value");
    }
  }
  Tensor t(shape);
  t.data_ = std::move(data);
  return t;
}

void ConvSpec::validate() const {
  if (in_channels < 1 || out_channels < 1) {
    throw ConfigError("conv channels must be >= 1");
  }
  if (kernel < 1 || kernel % 2 == 0) {
    throw ConfigError("conv kernel must be odd, got " + std::to_string(kernel));
  }
  const std::size_t want =
      static_cast<std::size_t>(out_channels) * in_channels * kernel * kernel;
  if (weights.size() != want) {
    throw ConfigError("conv weight count " + std::to_string(weights.size()) + ", expected " +
                      std::to_string(want));
  }
  if (bias.size() != static_cast<std::size_t>(out_channels)) {
    throw ConfigError("conv bias count " + std::to_string(bias.size()) + ", expected " +
                      std::to_string(out_channels));
  }
}

float Rng::uniform(float lo, float hi) {
  const std::uint32_t top = static_cast<std::uint32_t>(next_u64() >> 40);  // 24 bits
  return lo + (hi - lo) * (static_cast<float>(top) * (1.0f / 16777216.0f));
}

double Rng::uniform_double(double lo, double hi) {
  const std::uint64_t top = next_u64() >> 11;  // 53 bits
  return lo + (hi - lo) * (static_cast<double>(top) * (1.0 / 9007199254740992.0));
}

int Rng::uniform_int(int n) {
  return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
}

std::vector<float> init_uniform(std::size_t count, int fan_in, Rng& rng) {
  const float b = 1.0f / std::sqrt(static_cast<float>(fan_in));
  std::vector<float> out(count);
  for (auto& v : out) {
    v = rng.uniform(-b, b);
  }
  return out;
}

ConvSpec make_conv(int in_channels, int out_channels, int kernel, Rng& rng) {
  ConvSpec spec;
  spec.in_channels = in_channels;
  spec.out_channels = out_channels;
  spec.kernel = kernel;
  const int fan_in = in_channels * kernel * kernel;
  spec.weights = init_uniform(
      static_cast<std::size_t>(out_channels) * in_channels * kernel * kernel, fan_in, rng);
  spec.bias = init_uniform(static_cast<std::size_t>(out_channels), fan_in, rng);
  spec.validate();
  return spec;
}

Tensor conv2d(const Tensor& x, const ConvSpec& spec) {
  spec.validate();
  if (x.channels() != spec.in_channels) {
    throw ConfigError("conv2d: input has " + std::to_string(x.channels()) +
                      " channels, spec expects " + std::to_string(spec.in_channels));
  }
  const int B = x.batch(), C = spec.in_channels, H = x.height(), W = x.width();
  const int K = spec.kernel, P = spec.padding(), O = spec.out_channels;
  Tensor out(B, O, H, W);
  const float* in = x.data();
  const float* w = spec.weights.data();
  for (int b = 0; b < B; ++b) {
    for (int oc = 0; oc < O; ++oc) {
      const float* wc = w + static_cast<std::size_t>(oc) * C * K * K;
      const float bias = spec.bias[oc];
      for (int y = 0; y < H; ++y) {
        for (int xx = 0; xx < W; ++xx) {
          float acc = bias;
          for (int ic = 0; ic < C; ++ic) {
            const float* wk = wc + static_cast<std::size_t>(ic) * K * K;
            const float* row = in + x.index(b, ic, 0, 0);
            for (int ky = 0; ky < K; ++ky) {
              const int yy = y + ky - P;
              if (yy < 0 || yy >= H) continue;
              for (int kx = 0; kx < K; ++kx) {
                const int xs = xx + kx - P;
                if (xs < 0 || xs >= W) continue;
                acc += wk[ky * K + kx] * row[static_cast<std::size_t>(yy) * W + xs];
              }
            }
          }
          out.at(b, oc, y, xx) = acc;
        }
      }
    }
  }
  return out;
}

Tensor softmax_group(const Tensor& x, int group_size) {
  if (group_size < 1 || x.channels() % group_size != 0) {
    throw ConfigError("softmax_group: " + std::to_string(x.channels()) +
                      " channels not divisible by group size " + std::to_string(group_size));
  }
  const int B = x.batch(), C = x.channels(), H = x.height(), W = x.width();
  const int groups = C / group_size;
  Tensor out(B, C, H, W);
  for (int b = 0; b < B; ++b) {
    for (int g = 0; g < groups; ++g) {
      const int c0 = g * group_size;
      for (int y = 0; y < H; ++y) {
        for (int xx = 0; xx < W; ++xx) {
          float mx = x.at(b, c0, y, xx);
          for (int c = 1; c < group_size; ++c) {
            mx = std::max(mx, x.at(b, c0 + c, y, xx));
          }
          float sum = 0.0f;
          for (int c = 0; c < group_size; ++c) {
            const float e = std::exp(x.at(b, c0 + c, y, xx) - mx);
            out.at(b, c0 + c, y, xx) = e;
            sum += e;
          }
          for (int c = 0; c < group_size; ++c) {
            out.at(b, c0 + c, y, xx) /= sum;
          }
        }
      }
    }
  }
  return out;
}

Tensor nearest_upsample(const Tensor& x, int scale) {
  if (scale < 1) {
    throw ConfigError("nearest_upsample: scale must be >= 1");
  }
  const int B = x.batch(), C = x.channels(), H = x.height(), W = x.width();
  Tensor out(B, C, H * scale, W * scale);
  for (int b = 0; b < B; ++b) {
    for (int c = 0; c < C; ++c) {
      for (int y = 0; y < H * scale; ++y) {
        const float* src = x.data() + x.index(b, c, y / scale, 0);
        float* dst = out.data() + out.index(b, c, y, 0);
        for (int xx = 0; xx < W * scale; ++xx) {
          dst[xx] = src[xx / scale];
        }
      }
    }
  }
  return out;
}

Tensor relu(const Tensor& x) {
  Tensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.data()[i] = std::max(0.0f, out.data()[i]);
  }
  return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "add");
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.data()[i] += b.data()[i];
  }
  return out;
}

Tensor scale(const Tensor& x, float factor) {
  Tensor out = x;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.data()[i] *= factor;
  }
  return out;
}

Tensor slice_channels(const Tensor& x, int first, int count) {
  if (first < 0 || count < 1 || first + count > x.channels()) {
    throw ConfigError("slice_channels: slice [" + std::to_string(first) + ", " +
                      std::to_string(first + count) + ") out of range");
  }
  const int B = x.batch(), H = x.height(), W = x.width();
  Tensor out(B, count, H, W);
  const std::size_t plane = static_cast<std::size_t>(H) * W;
  for (int b = 0; b < B; ++b) {
    for (int c = 0; c < count; ++c) {
      const float* src = x.data() + x.index(b, first + c, 0, 0);
      float* dst = out.data() + out.index(b, c, 0, 0);
      std::copy(src, src + plane, dst);
    }
  }
  return out;
}

Tensor concat_channels(const std::vector<Tensor>& parts) {
  if (parts.empty()) {
    throw ConfigError("concat_channels: no inputs");
  }
  int total = 0;
  for (const Tensor& p : parts) {
    if (p.batch() != parts[0].batch() || p.height() != parts[0].height() ||
        p.width() != parts[0].width()) {
      throw ConfigError("concat_channels: batch/spatial dims differ");
    }
    total += p.channels();
  }
  const int B = parts[0].batch(), H = parts[0].height(), W = parts[0].width();
  Tensor out(B, total, H, W);
  const std::size_t plane = static_cast<std::size_t>(H) * W;
  for (int b = 0; b < B; ++b) {
    int at = 0;
    for (const Tensor& p : parts) {
      for (int c = 0; c < p.channels(); ++c, ++at) {
        const float* src = p.data() + p.index(b, c, 0, 0);
        std::copy(src, src + plane, out.data() + out.index(b, at, 0, 0));
      }
    }
  }
  return out;
}

Tensor avg_pool2(const Tensor& x) {
  if (x.height() % 2 != 0 || x.width() % 2 != 0) {
    throw ConfigError("avg_pool2: spatial dims must be even");
  }
  const int B = x.batch(), C = x.channels(), H = x.height() / 2, W = x.width() / 2;
  Tensor out(B, C, H, W);
  for (int b = 0; b < B; ++b) {
    for (int c = 0; c < C; ++c) {
      for (int y = 0; y < H; ++y) {
        for (int xx = 0; xx < W; ++xx) {
          const float s = x.at(b, c, 2 * y, 2 * xx) + x.at(b, c, 2 * y, 2 * xx + 1) +
                          x.at(b, c, 2 * y + 1, 2 * xx) + x.at(b, c, 2 * y + 1, 2 * xx + 1);
          out.at(b, c, y, xx) = 0.25f * s;
        }
      }
    }
  }
  return out;
}

}  // namespace cfis
