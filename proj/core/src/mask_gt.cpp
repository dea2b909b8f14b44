#include "vsrsynth/mask_gt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vsrsynth/error.hpp"
#include "vsrsynth/image_ops.hpp"

namespace vsrsynth {

void validate(const MaskParams& params) {
  if (!(params.k > 0.0)) fail(Errc::kInvalidArgument, "k must be positive");
  if (params.kernel_size < 1 || params.kernel_size % 2 == 0) {
    fail(Errc::kInvalidArgument, "kernel_size must be odd and >= 1");
  }
  if (!(params.sigma > 0.0)) fail(Errc::kInvalidArgument, "sigma must be positive");
  if (!(params.gate_threshold > 0.0 && params.gate_threshold < 1.0)) {
    fail(Errc::kInvalidArgument, "gate_threshold must lie in (0, 1)");
  }
  if (params.scale_factor < 1) fail(Errc::kInvalidArgument, "scale_factor must be >= 1");
}

ScalarMap residual_map(const Frame& clear_lr, const Frame& blur_lr, double k) {
  require_same_shape(clear_lr.view(), blur_lr.view(), "residual_map");
  ScalarMap out{clear_lr.height(), clear_lr.width(), {}};
  out.data.resize(clear_lr.view().pixel_count());
  const auto a = clear_lr.data();
  const auto b = blur_lr.data();
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    double sq = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      const double d = static_cast<double>(a[3 * i + c]) - b[3 * i + c];
      sq += d * d;
    }
    out.data[i] = k * (sq / 3.0);
  }
  return out;
}

GrayMap mask_from_residual(const ScalarMap& residual, int kernel_size, double sigma) {
  std::vector<float> clamped(residual.data.size());
  std::transform(residual.data.begin(), residual.data.end(), clamped.begin(),
                 [](double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); });
  const GrayMap softened =
      gaussian_blur(GrayMap(residual.height, residual.width, std::move(clamped)), kernel_size, sigma);
  std::vector<float> inverted(softened.sample_count());
  std::transform(softened.data().begin(), softened.data().end(), inverted.begin(),
                 [](float v) { return 1.0f - v; });
  return GrayMap::clamped(residual.height, residual.width, std::move(inverted));
}

MaskPair make_mask_gt_lr(const Frame& clear_lr, const Frame& blur_lr, const MaskParams& params) {
  validate(params);
  GrayMap mask =
      mask_from_residual(residual_map(clear_lr, blur_lr, params.k), params.kernel_size, params.sigma);
  const bool gated = mean(mask) < params.gate_threshold;
  return {std::move(mask), gated};
}

MaskPair make_mask_gt(const Frame& clear_hr, const Frame& blur_hr, const MaskParams& params) {
  validate(params);
  require_same_shape(clear_hr.view(), blur_hr.view(), "make_mask_gt");
  const int s = params.scale_factor;
  if (clear_hr.height() % s != 0 || clear_hr.width() % s != 0) {
    fail(Errc::kInvalidArgument, "HR size " + std::to_string(clear_hr.height()) + "x" +
                                     std::to_string(clear_hr.width()) +
                                     " is not divisible by scale factor " + std::to_string(s));
  }
  const int h = clear_hr.height() / s;
  const int w = clear_hr.width() / s;
  return make_mask_gt_lr(resize_bicubic(clear_hr, h, w), resize_bicubic(blur_hr, h, w), params);
}

double mask_loss(const GrayMap& mask_gt, const GrayMap& mask_pred, double gate_threshold) {
  require_same_shape(mask_gt.view(), mask_pred.view(), "mask_loss");
  if (!(mean(mask_gt) < gate_threshold)) return 0.0;
  const auto g = mask_gt.data();
  const auto p = mask_pred.data();
  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) total += std::abs(static_cast<double>(g[i]) - p[i]);
  return total / static_cast<double>(g.size());
}

}  // namespace vsrsynth
