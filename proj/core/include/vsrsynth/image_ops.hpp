#pragma once

#include <vector>

#include "vsrsynth/frame.hpp"

namespace vsrsynth {

/// Catmull-Rom cubic convolution kernel (a = -0.5).
double cubic_kernel(double x);

/// Bicubic resampling with center-aligned sampling: output pixel i maps to
/// source coordinate (i + 0.5) * in / out - 0.5. When shrinking, the kernel
/// is stretched by in/out (antialiased, as in MATLAB's imresize). Taps
/// outside the image replicate the edge; weights are normalized to sum 1.
/// The result is clamped to [0,1].
Frame resize_bicubic(const Frame& frame, int out_h, int out_w);
GrayMap resize_bicubic(const GrayMap& map, int out_h, int out_w);

/// Normalized 1-D Gaussian taps for x in [-k/2, k/2]. `size` must be odd.
std::vector<double> gaussian_kernel(int size, double sigma);

/// Separable Gaussian blur, replicate-edge padding, double accumulation.
GrayMap gaussian_blur(const GrayMap& map, int kernel_size, double sigma);
Frame gaussian_blur(const Frame& frame, int kernel_size, double sigma);

/// Dense odd-sized square kernel, row-major; applied with replicate padding.
struct Kernel2D {
  int size = 0;
  std::vector<double> taps;
};

/// Normalized anisotropic Gaussian with principal sigmas and rotation (radians).
Kernel2D anisotropic_gaussian_kernel(int size, double sigma_x, double sigma_y, double theta);

Frame convolve(const Frame& frame, const Kernel2D& kernel);

/// Exact sub-rectangle copy; throws kOutOfRange if the window leaves the frame.
Frame crop(const Frame& frame, int top, int left, int h, int w);

/// Aspect-preserving bicubic scale so the frame covers (out_h, out_w), then
/// a centered crop to exactly that size.
Frame scale_and_center_crop(const Frame& frame, int out_h, int out_w);

/// BT.601 luma per pixel, row-major.
std::vector<float> luminance(const Frame& frame);

double mean(const GrayMap& map);

}  // namespace vsrsynth
