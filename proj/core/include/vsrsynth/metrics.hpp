#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <vector>

#include "vsrsynth/frame.hpp"

namespace vsrsynth {

/// Mean absolute difference over all samples.
double l1(const Frame& a, const Frame& b);

/// 10 log10(1 / MSE); +infinity for identical frames.
double psnr(const Frame& a, const Frame& b);

/// Single-scale SSIM on BT.601 luma with an 11x11 Gaussian window
/// (sigma 1.5, valid region only), C1 = (0.01)^2, C2 = (0.03)^2. Both sides
/// must be at least 11 pixels.
double ssim(const Frame& a, const Frame& b);

/// l1(bicubic_down(hr_motion, scale), cleaned_lr).
double cleaning_residual(const Frame& hr_motion, const Frame& cleaned_lr, int scale = 4);

struct MetricSeries {
  std::vector<double> values;
  double mean = 0.0;
  double std = 0.0;  // population
};

/// Per-frame values and aggregates for each metric, keyed by metric name.
struct MetricReport {
  std::map<std::string, MetricSeries> metrics;
  std::vector<std::string> frames;

  void add(const std::string& metric, double value);
  /// Recomputes every mean/std from the per-frame values.
  void finalize();
};

/// Non-finite values (PSNR of identical frames) are written as null.
nlohmann::json to_json(const MetricReport& report);

/// Merges externally computed per-frame series, `{"name": [v0, v1, ...]}` or
/// a full report document, into `report`. Lengths must match the frame count.
void merge_external(MetricReport& report, const nlohmann::json& doc);

}  // namespace vsrsynth
