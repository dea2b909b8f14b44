#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vsrsynth {

/// Non-owning, read-only view of an interleaved image buffer. Samples are
/// row-major with `channels` values per pixel.
struct ImageView {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::span<const float> data;

  float at(int y, int x, int c = 0) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::size_t pixel_count() const { return static_cast<std::size_t>(height) * width; }
};

/// Owning image with samples in [0,1]. `Frame` is RGB, `GrayMap` single channel.
///
/// The [0,1] range is enforced at construction: the checked constructor
/// rejects out-of-range or NaN samples, `clamped()` saturates them instead.
template <int Channels>
class Image {
 public:
  static constexpr int kChannels = Channels;

  Image() = default;
  Image(int height, int width, float fill = 0.0f);
  Image(int height, int width, std::vector<float> data);

  /// Takes ownership of `data`, clamping every sample into [0,1] (NaN -> 0).
  static Image clamped(int height, int width, std::vector<float> data);

  int height() const { return height_; }
  int width() const { return width_; }
  bool empty() const { return data_.empty(); }
  std::size_t sample_count() const { return data_.size(); }
  std::span<const float> data() const { return data_; }

  float at(int y, int x, int c = 0) const {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * Channels + c];
  }

  ImageView view() const { return {height_, width_, Channels, data_}; }

  /// Moves the sample buffer out, leaving the image empty.
  std::vector<float> release() && { height_ = width_ = 0; return std::move(data_); }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  struct Unchecked {};
  Image(Unchecked, int height, int width, std::vector<float> data)
      : height_(height), width_(width), data_(std::move(data)) {}

  int height_ = 0;
  int width_ = 0;
  std::vector<float> data_;
};

using Frame = Image<3>;
using GrayMap = Image<1>;

extern template class Image<1>;
extern template class Image<3>;

/// Unbounded single-channel real map (pre-clamp residuals).
struct ScalarMap {
  int height = 0;
  int width = 0;
  std::vector<double> data;

  double at(int y, int x) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

/// Ordered frames of identical size. Never empty.
class Clip {
 public:
  explicit Clip(std::vector<Frame> frames, double fps = 30.0);

  std::size_t size() const { return frames_.size(); }
  const Frame& operator[](std::size_t i) const { return frames_[i]; }
  const std::vector<Frame>& frames() const { return frames_; }
  int height() const { return frames_.front().height(); }
  int width() const { return frames_.front().width(); }
  double fps() const { return fps_; }

  std::vector<Frame> release() && { return std::move(frames_); }

  friend bool operator==(const Clip&, const Clip&) = default;

 private:
  std::vector<Frame> frames_;
  double fps_;
};

/// Throws kDimensionMismatch unless both views share height/width/channels.
void require_same_shape(const ImageView& a, const ImageView& b, const char* what);

}  // namespace vsrsynth
