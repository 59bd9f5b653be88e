#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cfis/errors.hpp"

namespace cfis {

struct Shape {
  int batch = 1;
  int channels = 1;
  int height = 1;
  int width = 1;

  std::size_t elements() const {
    return static_cast<std::size_t>(batch) * channels * height * width;
  }
  bool operator==(const Shape&) const = default;
};

/// Dense NCHW float tensor, row-major. Constructors validate the shape and
/// (when data is supplied) reject non-finite values; in-place mutation
/// through at()/data() is unchecked.
class Tensor {
 public:
  explicit Tensor(Shape shape);
  Tensor(int batch, int channels, int height, int width)
      : Tensor(Shape{batch, channels, height, width}) {}

  static Tensor from_data(Shape shape, std::vector<float> data);

  const Shape& shape() const { return shape_; }
  int batch() const { return shape_.batch; }
  int channels() const { return shape_.channels; }
  int height() const { return shape_.height; }
  int width() const { return shape_.width; }
  std::size_t size() const { return data_.size(); }

  float at(int b, int c, int y, int x) const { return data_[index(b, c, y, x)]; }
  float& at(int b, int c, int y, int x) { return data_[index(b, c, y, x)]; }

  const float* data() const { return data_.data(); }
  float* data() { return data_.data(); }
  const std::vector<float>& values() const { return data_; }

  std::size_t index(int b, int c, int y, int x) const {
    return ((static_cast<std::size_t>(b) * shape_.channels + c) * shape_.height + y) *
               shape_.width +
           x;
  }

 private:
  Shape shape_;
  std::vector<float> data_;
};

/// Dense convolution layer description: odd kernel, stride 1, zero "same"
/// padding of floor(k/2).
struct ConvSpec {
  int in_channels = 0;
  int out_channels = 0;
  int kernel = 1;
  std::vector<float> weights;  // out * in * k * k, row-major
  std::vector<float> bias;     // out

  void validate() const;
  int padding() const { return kernel / 2; }
};

/// Deterministic pseudo-random stream. std::mt19937_64 output is pinned by
/// the standard; the value mappings below avoid std distributions, which are
/// not, so sequences are identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }
  float uniform(float lo, float hi);
  double uniform_double(double lo, double hi);
  /// Uniform integer in [0, n).
  int uniform_int(int n);

 private:
  std::mt19937_64 gen_;
};

/// Uniform init in [-b, b] with b = 1/sqrt(fan_in).
std::vector<float> init_uniform(std::size_t count, int fan_in, Rng& rng);
ConvSpec make_conv(int in_channels, int out_channels, int kernel, Rng& rng);

Tensor conv2d(const Tensor& x, const ConvSpec& spec);
Tensor softmax_group(const Tensor& x, int group_size);
Tensor nearest_upsample(const Tensor& x, int scale);

Tensor relu(const Tensor& x);
Tensor add(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& x, float factor);
Tensor slice_channels(const Tensor& x, int first, int count);
Tensor concat_channels(const std::vector<Tensor>& parts);
/// 2x2 mean pooling, stride 2. Spatial dims must be even.
Tensor avg_pool2(const Tensor& x);

}  // namespace cfis
