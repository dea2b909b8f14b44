#pragma once

#include "vsrsynth/frame.hpp"

namespace vsrsynth {

struct MaskParams {
  double k = 100.0;           // residual magnification
  int kernel_size = 7;        // softening Gaussian
  double sigma = 3.0;
  double gate_threshold = 0.6;
  int scale_factor = 4;       // HR -> LR before differencing
};

void validate(const MaskParams& params);

struct MaskPair {
  GrayMap mask_gt;  // 1 = clear, 0 = fully blurred
  bool gated = false;
};

/// k times the per-pixel mean over RGB of the squared difference. Unclamped.
ScalarMap residual_map(const Frame& clear_lr, const Frame& blur_lr, double k);

/// clamp(residual, 0, 1) -> Gaussian soften -> 1 - x.
GrayMap mask_from_residual(const ScalarMap& residual, int kernel_size, double sigma);

/// Full ground-truth pipeline on an HR pair: bicubic downscale by
/// scale_factor, residual, clamp, soften, invert; `gated` when the mask mean
/// falls below gate_threshold.
MaskPair make_mask_gt(const Frame& clear_hr, const Frame& blur_hr, const MaskParams& params = {});

/// Same, for pairs that are already at LR resolution.
MaskPair make_mask_gt_lr(const Frame& clear_lr, const Frame& blur_lr, const MaskParams& params = {});

/// Mean |gt - pred| when mean(gt) < gate_threshold, exactly 0 otherwise.
double mask_loss(const GrayMap& mask_gt, const GrayMap& mask_pred, double gate_threshold = 0.6);

}  // namespace vsrsynth
