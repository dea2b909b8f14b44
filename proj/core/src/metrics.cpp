#include "vsrsynth/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "vsrsynth/error.hpp"
#include "vsrsynth/image_ops.hpp"

namespace vsrsynth {
namespace {

constexpr int kWindow = 11;
constexpr double kWindowSigma = 1.5;

// Valid-region separable filtering of a single-channel double plane.
std::vector<double> filter_valid(const std::vector<double>& in, int h, int w,
                                 const std::vector<double>& k, int& oh, int& ow) {
  const int n = static_cast<int>(k.size());
  ow = w - n + 1;
  oh = h - n + 1;
  std::vector<double> tmp(static_cast<std::size_t>(h) * ow);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += k[i] * in[static_cast<std::size_t>(y) * w + x + i];
      tmp[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += k[i] * tmp[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  return out;
}

double mse(const Frame& a, const Frame& b) {
  const auto x = a.data();
  const auto y = b.data();
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = static_cast<double>(x[i]) - y[i];
    total += d * d;
  }
  return total / static_cast<double>(x.size());
}

}  // namespace

double l1(const Frame& a, const Frame& b) {
  require_same_shape(a.view(), b.view(), "l1");
  const auto x = a.data();
  const auto y = b.data();
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) total += std::abs(static_cast<double>(x[i]) - y[i]);
  return total / static_cast<double>(x.size());
}

double psnr(const Frame& a, const Frame& b) {
  require_same_shape(a.view(), b.view(), "psnr");
  const double m = mse(a, b);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / m);
}

double ssim(const Frame& a, const Frame& b) {
  require_same_shape(a.view(), b.view(), "ssim");
  const int h = a.height();
  const int w = a.width();
  if (h < kWindow || w < kWindow) {
    fail(Errc::kInvalidArgument, "ssim needs frames of at least 11x11, got " + std::to_string(h) +
                                     "x" + std::to_string(w));
  }
  const auto la = luminance(a);
  const auto lb = luminance(b);
  const std::size_t n = la.size();
  std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = la[i];
    y[i] = lb[i];
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto k = gaussian_kernel(kWindow, kWindowSigma);
  int oh = 0;
  int ow = 0;
  const auto mx = filter_valid(x, h, w, k, oh, ow);
  const auto my = filter_valid(y, h, w, k, oh, ow);
  const auto sxx = filter_valid(xx, h, w, k, oh, ow);
  const auto syy = filter_valid(yy, h, w, k, oh, ow);
  const auto sxy = filter_valid(xy, h, w, k, oh, ow);

  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;
  double total = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = sxx[i] - mx[i] * mx[i];
    const double vy = syy[i] - my[i] * my[i];
    const double cov = sxy[i] - mx[i] * my[i];
    total += ((2.0 * mx[i] * my[i] + c1) * (2.0 * cov + c2)) /
             ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
  }
  return total / static_cast<double>(mx.size());
}

double cleaning_residual(const Frame& hr_motion, const Frame& cleaned_lr, int scale) {
  if (scale < 1) fail(Errc::kInvalidArgument, "scale must be >= 1");
  const int h = hr_motion.height() / scale;
  const int w = hr_motion.width() / scale;
  if (h != cleaned_lr.height() || w != cleaned_lr.width()) {
    fail(Errc::kDimensionMismatch,
         "cleaned LR is " + std::to_string(cleaned_lr.height()) + "x" +
             std::to_string(cleaned_lr.width()) + ", downsampled HR is " + std::to_string(h) +
             "x" + std::to_string(w));
  }
  return l1(resize_bicubic(hr_motion, h, w), cleaned_lr);
}

void MetricReport::add(const std::string& metric, double value) {
  metrics[metric].values.push_back(value);
}

void MetricReport::finalize() {
  for (auto& [name, series] : metrics) {
    const auto& v = series.values;
    if (v.empty()) {
      series.mean = series.std = 0.0;
      continue;
    }
    double total = 0.0;
    for (double x : v) total += x;
    series.mean = total / static_cast<double>(v.size());
    double var = 0.0;
    if (std::isfinite(series.mean)) {
      for (double x : v) var += (x - series.mean) * (x - series.mean);
      series.std = std::sqrt(var / static_cast<double>(v.size()));
    } else {
      series.std = std::numeric_limits<double>::quiet_NaN();
    }
  }
}

nlohmann::json to_json(const MetricReport& report) {
  auto finite_or_null = [](double v) -> nlohmann::json {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  };
  nlohmann::json metrics = nlohmann::json::object();
  for (const auto& [name, s] : report.metrics) {
    nlohmann::json values = nlohmann::json::array();
    for (double v : s.values) values.push_back(finite_or_null(v));
    metrics[name] = {{"per_frame", values}, {"mean", finite_or_null(s.mean)},
                     {"std", finite_or_null(s.std)}};
  }
  return {{"frames", report.frames}, {"count", report.frames.size()}, {"metrics", metrics}};
}

void merge_external(MetricReport& report, const nlohmann::json& doc) {
  const nlohmann::json& source = doc.contains("metrics") ? doc.at("metrics") : doc;
  if (!source.is_object()) fail(Errc::kInvalidConfig, "external metrics must be a JSON object");
  for (const auto& item : source.items()) {
    const nlohmann::json& series =
        item.value().is_object() ? item.value().at("per_frame") : item.value();
    if (!series.is_array() || series.size() != report.frames.size()) {
      fail(Errc::kDimensionMismatch, "external metric '" + item.key() + "' has " +
                                         std::to_string(series.size()) + " values for " +
                                         std::to_string(report.frames.size()) + " frames");
    }
    auto& target = report.metrics[item.key()];
    target.values.clear();
    for (const auto& v : series) {
      target.values.push_back(v.is_null() ? std::numeric_limits<double>::infinity()
                                          : v.get<double>());
    }
  }
  report.finalize();
}

}  // namespace vsrsynth
