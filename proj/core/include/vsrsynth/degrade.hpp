#pragma once

#include <nlohmann/json.hpp>

#include <vector>

#include "vsrsynth/frame.hpp"
#include "vsrsynth/random.hpp"

namespace vsrsynth {

struct RealRange {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const RealRange&, const RealRange&) = default;
};

struct IntRange {
  int lo = 0;
  int hi = 0;
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

// Per-stage sampling domains. Every operation has its own apply probability.
struct BlurStageConfig {
  double probability = 1.0;
  double isotropic_probability = 0.5;  // otherwise anisotropic
  IntRange kernel_size{7, 21};         // odd bounds
  RealRange sigma{0.2, 3.0};
  friend bool operator==(const BlurStageConfig&, const BlurStageConfig&) = default;
};

struct ResizeStageConfig {
  double probability = 1.0;
  RealRange scale{0.3, 1.5};  // bicubic
  friend bool operator==(const ResizeStageConfig&, const ResizeStageConfig&) = default;
};

struct NoiseStageConfig {
  double probability = 1.0;
  double gaussian_probability = 0.5;  // otherwise poisson-like
  RealRange gaussian_sigma{0.0, 0.1};
  RealRange poisson_scale{0.0, 0.05};
  double gray_probability = 0.4;
  friend bool operator==(const NoiseStageConfig&, const NoiseStageConfig&) = default;
};

struct JpegStageConfig {
  double probability = 1.0;
  IntRange quality{30, 95};
  friend bool operator==(const JpegStageConfig&, const JpegStageConfig&) = default;
};

struct StageConfig {
  BlurStageConfig blur;
  ResizeStageConfig resize;
  NoiseStageConfig noise;
  JpegStageConfig jpeg;
  friend bool operator==(const StageConfig&, const StageConfig&) = default;
};

/// Higher-order degradation: `stages.size()` rounds of
/// blur -> resize -> noise -> JPEG, then a bicubic resize to exactly
/// (H / final_scale, W / final_scale).
struct DegradeConfig {
  std::vector<StageConfig> stages = default_stages();
  int final_scale = 4;
  Seed seed = 0;

  static std::vector<StageConfig> default_stages();
  friend bool operator==(const DegradeConfig&, const DegradeConfig&) = default;
};

/// Throws kInvalidConfig describing the first out-of-range field.
void validate(const DegradeConfig& config);

enum class NoiseKind { kGaussian, kPoisson };

struct StageTrace {
  struct Blur {
    bool applied = false;
    bool isotropic = true;
    int kernel_size = 0;
    double sigma_x = 0.0;
    double sigma_y = 0.0;
    double theta = 0.0;
  } blur;
  struct Resize {
    bool applied = false;
    int out_h = 0;
    int out_w = 0;
  } resize;
  struct Noise {
    bool applied = false;
    NoiseKind kind = NoiseKind::kGaussian;
    double strength = 0.0;
    bool gray = false;
    Seed seed = 0;
  } noise;
  struct Jpeg {
    bool applied = false;
    int quality = 100;
  } jpeg;
};

/// Concrete parameters one degrade_frame call used; replaying it skips all
/// sampling and reproduces the output bit for bit.
struct DegradeTrace {
  Seed seed = 0;
  std::vector<StageTrace> stages;
  int out_h = 0;
  int out_w = 0;
};

/// Signal-independent (gaussian: sigma = strength) or signal-dependent
/// (poisson: variance = strength * value) noise, clamped to [0,1]. With
/// `gray` one draw per pixel is shared by all channels and the poisson
/// variance follows luma.
Frame add_noise(const Frame& frame, NoiseKind kind, double strength, bool gray, Seed seed);

/// Draws the concrete stage parameters for a frame of the given size.
DegradeTrace sample_trace(int height, int width, const DegradeConfig& config);

Frame replay_trace(const Frame& frame, const DegradeTrace& trace);

struct DegradeResult {
  Frame frame;
  DegradeTrace trace;
};

DegradeResult degrade_frame(const Frame& frame, const DegradeConfig& config);

// JSON documents (schema in README).
DegradeConfig degrade_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const DegradeConfig& config);
nlohmann::json to_json(const DegradeTrace& trace);
DegradeTrace degrade_trace_from_json(const nlohmann::json& doc);

}  // namespace vsrsynth
