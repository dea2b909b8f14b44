#include "vsrsynth/image_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "vsrsynth/error.hpp"

namespace vsrsynth {
namespace {

// One output sample's contributing source indices (already edge-clamped).
struct Taps {
  std::vector<int> index;
  std::vector<double> weight;
};

std::vector<Taps> resize_taps(int in_size, int out_size) {
  const double scale = static_cast<double>(out_size) / in_size;
  const double stretch = scale < 1.0 ? scale : 1.0;
  const double support = 2.0 / stretch;
  std::vector<Taps> taps(out_size);
  for (int i = 0; i < out_size; ++i) {
    const double center = (i + 0.5) / scale - 0.5;
    const int first = static_cast<int>(std::floor(center - support));
    const int last = static_cast<int>(std::ceil(center + support));
    Taps& t = taps[i];
    double total = 0.0;
    for (int j = first; j <= last; ++j) {
      const double w = cubic_kernel((center - j) * stretch);
      if (w == 0.0) continue;
      t.index.push_back(std::clamp(j, 0, in_size - 1));
      t.weight.push_back(w);
      total += w;
    }
    for (double& w : t.weight) w /= total;
  }
  return taps;
}

std::vector<float> resize_planar(const ImageView& src, int out_h, int out_w) {
  if (out_h < 1 || out_w < 1) {
    fail(Errc::kInvalidArgument, "resize target must be at least 1x1, got " +
                                     std::to_string(out_h) + "x" + std::to_string(out_w));
  }
  const int c = src.channels;
  const auto xt = resize_taps(src.width, out_w);
  const auto yt = resize_taps(src.height, out_h);

  // Horizontal pass into a double buffer of src.height x out_w.
  std::vector<double> tmp(static_cast<std::size_t>(src.height) * out_w * c);
  for (int y = 0; y < src.height; ++y) {
    const float* row = src.data.data() + static_cast<std::size_t>(y) * src.width * c;
    double* out = tmp.data() + static_cast<std::size_t>(y) * out_w * c;
    for (int x = 0; x < out_w; ++x) {
      const Taps& t = xt[x];
      for (int ch = 0; ch < c; ++ch) {
        double acc = 0.0;
        for (std::size_t k = 0; k < t.index.size(); ++k) {
          acc += t.weight[k] * row[static_cast<std::size_t>(t.index[k]) * c + ch];
        }
        out[static_cast<std::size_t>(x) * c + ch] = acc;
      }
    }
  }

  std::vector<float> dst(static_cast<std::size_t>(out_h) * out_w * c);
  const std::size_t stride = static_cast<std::size_t>(out_w) * c;
  std::vector<double> acc(stride);
  for (int y = 0; y < out_h; ++y) {
    const Taps& t = yt[y];
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t k = 0; k < t.index.size(); ++k) {
      const double w = t.weight[k];
      const double* in = tmp.data() + static_cast<std::size_t>(t.index[k]) * stride;
      for (std::size_t s = 0; s < stride; ++s) acc[s] += w * in[s];
    }
    float* out = dst.data() + y * stride;
    for (std::size_t s = 0; s < stride; ++s) out[s] = static_cast<float>(acc[s]);
  }
  return dst;
}

// Separable convolution with replicate padding; kernels are odd-length.
std::vector<float> convolve_separable(const ImageView& src, const std::vector<double>& kernel) {
  const int c = src.channels;
  const int h = src.height;
  const int w = src.width;
  const int half = static_cast<int>(kernel.size()) / 2;
  const std::size_t stride = static_cast<std::size_t>(w) * c;

  std::vector<double> tmp(static_cast<std::size_t>(h) * stride);
  for (int y = 0; y < h; ++y) {
    const float* row = src.data.data() + y * stride;
    double* out = tmp.data() + y * stride;
    for (int x = 0; x < w; ++x) {
      for (int ch = 0; ch < c; ++ch) {
        double acc = 0.0;
        for (int k = -half; k <= half; ++k) {
          const int sx = std::clamp(x + k, 0, w - 1);
          acc += kernel[k + half] * row[static_cast<std::size_t>(sx) * c + ch];
        }
        out[static_cast<std::size_t>(x) * c + ch] = acc;
      }
    }
  }

  std::vector<float> dst(static_cast<std::size_t>(h) * stride);
  std::vector<double> acc(stride);
  for (int y = 0; y < h; ++y) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int k = -half; k <= half; ++k) {
      const int sy = std::clamp(y + k, 0, h - 1);
      const double wk = kernel[k + half];
      const double* in = tmp.data() + sy * stride;
      for (std::size_t s = 0; s < stride; ++s) acc[s] += wk * in[s];
    }
    float* out = dst.data() + y * stride;
    for (std::size_t s = 0; s < stride; ++s) out[s] = static_cast<float>(acc[s]);
  }
  return dst;
}

template <int C>
Image<C> resize_impl(const Image<C>& img, int out_h, int out_w) {
  if (img.empty()) fail(Errc::kInvalidArgument, "cannot resize an empty image");
  return Image<C>::clamped(out_h, out_w, resize_planar(img.view(), out_h, out_w));
}

template <int C>
Image<C> blur_impl(const Image<C>& img, int kernel_size, double sigma) {
  const auto kernel = gaussian_kernel(kernel_size, sigma);
  return Image<C>::clamped(img.height(), img.width(), convolve_separable(img.view(), kernel));
}

}  // namespace

double cubic_kernel(double x) {
  constexpr double a = -0.5;
  const double ax = std::abs(x);
  if (ax <= 1.0) return ((a + 2.0) * ax - (a + 3.0)) * ax * ax + 1.0;
  if (ax < 2.0) return ((a * ax - 5.0 * a) * ax + 8.0 * a) * ax - 4.0 * a;
  return 0.0;
}

Frame resize_bicubic(const Frame& frame, int out_h, int out_w) {
  return resize_impl(frame, out_h, out_w);
}

GrayMap resize_bicubic(const GrayMap& map, int out_h, int out_w) {
  return resize_impl(map, out_h, out_w);
}

std::vector<double> gaussian_kernel(int size, double sigma) {
  if (size < 1 || size % 2 == 0) {
    fail(Errc::kInvalidArgument, "gaussian kernel size must be odd and >= 1, got " +
                                     std::to_string(size));
  }
  if (!(sigma > 0.0)) fail(Errc::kInvalidArgument, "gaussian sigma must be positive");
  const int half = size / 2;
  std::vector<double> k(size);
  for (int i = -half; i <= half; ++i) k[i + half] = std::exp(-(i * i) / (2.0 * sigma * sigma));
  const double total = std::accumulate(k.begin(), k.end(), 0.0);
  for (double& v : k) v /= total;
  return k;
}

GrayMap gaussian_blur(const GrayMap& map, int kernel_size, double sigma) {
  return blur_impl(map, kernel_size, sigma);
}

Frame gaussian_blur(const Frame& frame, int kernel_size, double sigma) {
  return blur_impl(frame, kernel_size, sigma);
}

Kernel2D anisotropic_gaussian_kernel(int size, double sigma_x, double sigma_y, double theta) {
  if (size < 1 || size % 2 == 0) fail(Errc::kInvalidArgument, "kernel size must be odd");
  if (!(sigma_x > 0.0) || !(sigma_y > 0.0)) {
    fail(Errc::kInvalidArgument, "anisotropic sigmas must be positive");
  }
  // Inverse covariance of R * diag(sx^2, sy^2) * R^T.
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  const double ix = 1.0 / (sigma_x * sigma_x);
  const double iy = 1.0 / (sigma_y * sigma_y);
  const double a = ct * ct * ix + st * st * iy;
  const double b = ct * st * (ix - iy);
  const double c = st * st * ix + ct * ct * iy;

  Kernel2D k{size, std::vector<double>(static_cast<std::size_t>(size) * size)};
  const int half = size / 2;
  double total = 0.0;
  for (int y = -half; y <= half; ++y) {
    for (int x = -half; x <= half; ++x) {
      const double v = std::exp(-0.5 * (a * x * x + 2.0 * b * x * y + c * y * y));
      k.taps[static_cast<std::size_t>(y + half) * size + (x + half)] = v;
      total += v;
    }
  }
  for (double& v : k.taps) v /= total;
  return k;
}

Frame convolve(const Frame& frame, const Kernel2D& kernel) {
  if (kernel.size < 1 || kernel.size % 2 == 0 ||
      kernel.taps.size() != static_cast<std::size_t>(kernel.size) * kernel.size) {
    fail(Errc::kInvalidArgument, "malformed 2-D kernel");
  }
  const int h = frame.height();
  const int w = frame.width();
  const int half = kernel.size / 2;
  const auto src = frame.data();
  std::vector<float> dst(src.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (int ky = -half; ky <= half; ++ky) {
        const int sy = std::clamp(y + ky, 0, h - 1);
        const double* krow = kernel.taps.data() + static_cast<std::size_t>(ky + half) * kernel.size;
        for (int kx = -half; kx <= half; ++kx) {
          const int sx = std::clamp(x + kx, 0, w - 1);
          const float* px = src.data() + (static_cast<std::size_t>(sy) * w + sx) * 3;
          const double wk = krow[kx + half];
          acc[0] += wk * px[0];
          acc[1] += wk * px[1];
          acc[2] += wk * px[2];
        }
      }
      float* out = dst.data() + (static_cast<std::size_t>(y) * w + x) * 3;
      for (int ch = 0; ch < 3; ++ch) out[ch] = static_cast<float>(acc[ch]);
    }
  }
  return Frame::clamped(h, w, std::move(dst));
}

Frame crop(const Frame& frame, int top, int left, int h, int w) {
  if (h < 1 || w < 1 || top < 0 || left < 0 || top + h > frame.height() ||
      left + w > frame.width()) {
    fail(Errc::kOutOfRange, "crop window (" + std::to_string(top) + "," + std::to_string(left) +
                                "," + std::to_string(h) + "x" + std::to_string(w) +
                                ") outside " + std::to_string(frame.height()) + "x" +
                                std::to_string(frame.width()) + " frame");
  }
  std::vector<float> out;
  out.reserve(static_cast<std::size_t>(h) * w * 3);
  const auto src = frame.data();
  for (int y = top; y < top + h; ++y) {
    const auto begin = src.begin() + (static_cast<std::ptrdiff_t>(y) * frame.width() + left) * 3;
    out.insert(out.end(), begin, begin + static_cast<std::ptrdiff_t>(w) * 3);
  }
  return Frame(h, w, std::move(out));
}

Frame scale_and_center_crop(const Frame& frame, int out_h, int out_w) {
  if (out_h < 1 || out_w < 1) fail(Errc::kInvalidArgument, "crop target must be positive");
  const double s = std::max(static_cast<double>(out_h) / frame.height(),
                            static_cast<double>(out_w) / frame.width());
  const int sh = std::max(out_h, static_cast<int>(std::lround(frame.height() * s)));
  const int sw = std::max(out_w, static_cast<int>(std::lround(frame.width() * s)));
  const Frame scaled =
      (sh == frame.height() && sw == frame.width()) ? frame : resize_bicubic(frame, sh, sw);
  return crop(scaled, (sh - out_h) / 2, (sw - out_w) / 2, out_h, out_w);
}

std::vector<float> luminance(const Frame& frame) {
  const auto src = frame.data();
  std::vector<float> y(frame.view().pixel_count());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = static_cast<float>(0.299 * src[3 * i] + 0.587 * src[3 * i + 1] + 0.114 * src[3 * i + 2]);
  }
  return y;
}

double mean(const GrayMap& map) {
  const auto d = map.data();
  if (d.empty()) return 0.0;
  double total = 0.0;
  for (float v : d) total += v;
  return total / static_cast<double>(d.size());
}

}  // namespace vsrsynth
