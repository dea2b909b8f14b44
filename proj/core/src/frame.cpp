#include "vsrsynth/frame.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vsrsynth/error.hpp"

namespace vsrsynth {
namespace {

void check_dims(int height, int width) {
  if (height < 1 || width < 1) {
    fail(Errc::kInvalidArgument, "image dimensions must be positive, got " +
                                     std::to_string(height) + "x" + std::to_string(width));
  }
}

}  // namespace

template <int C>
Image<C>::Image(int height, int width, float fill) : height_(height), width_(width) {
  check_dims(height, width);
  if (!(fill >= 0.0f && fill <= 1.0f)) fail(Errc::kOutOfRange, "fill value outside [0,1]");
  data_.assign(static_cast<std::size_t>(height) * width * C, fill);
}

template <int C>
Image<C>::Image(int height, int width, std::vector<float> data)
    : height_(height), width_(width), data_(std::move(data)) {
  check_dims(height, width);
  if (data_.size() != static_cast<std::size_t>(height) * width * C) {
    fail(Errc::kDimensionMismatch, "sample buffer length " + std::to_string(data_.size()) +
                                       " does not match " + std::to_string(height) + "x" +
                                       std::to_string(width) + "x" + std::to_string(C));
  }
  for (float v : data_) {
    if (!(v >= 0.0f && v <= 1.0f)) fail(Errc::kOutOfRange, "sample outside [0,1]");
  }
}

template <int C>
Image<C> Image<C>::clamped(int height, int width, std::vector<float> data) {
  check_dims(height, width);
  if (data.size() != static_cast<std::size_t>(height) * width * C) {
    fail(Errc::kDimensionMismatch, "sample buffer length does not match dimensions");
  }
  for (float& v : data) v = std::isnan(v) ? 0.0f : std::clamp(v, 0.0f, 1.0f);
  return Image(Unchecked{}, height, width, std::move(data));
}

template class Image<1>;
template class Image<3>;

Clip::Clip(std::vector<Frame> frames, double fps) : frames_(std::move(frames)), fps_(fps) {
  if (frames_.empty()) fail(Errc::kInvalidArgument, "clip must contain at least one frame");
  for (const Frame& f : frames_) {
    if (f.empty()) fail(Errc::kInvalidArgument, "clip contains an empty frame");
    if (f.height() != frames_.front().height() || f.width() != frames_.front().width()) {
      fail(Errc::kDimensionMismatch, "clip frames differ in size");
    }
  }
}

void require_same_shape(const ImageView& a, const ImageView& b, const char* what) {
  if (a.height != b.height || a.width != b.width || a.channels != b.channels) {
    fail(Errc::kDimensionMismatch,
         std::string(what) + ": shape " + std::to_string(a.height) + "x" +
             std::to_string(a.width) + "x" + std::to_string(a.channels) + " vs " +
             std::to_string(b.height) + "x" + std::to_string(b.width) + "x" +
             std::to_string(b.channels));
  }
}

}  // namespace vsrsynth
