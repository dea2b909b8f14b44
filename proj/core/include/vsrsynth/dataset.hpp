#pragma once

#include <nlohmann/json.hpp>

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vsrsynth/blur_synth.hpp"
#include "vsrsynth/degrade.hpp"
#include "vsrsynth/flow.hpp"
#include "vsrsynth/mask_gt.hpp"

namespace vsrsynth {

namespace fs = std::filesystem;

inline constexpr int kManifestSchemaVersion = 1;

enum class Split { kTrain = 0, kValid = 1, kTest = 2 };
inline constexpr std::array<Split, 3> kAllSplits = {Split::kTrain, Split::kValid, Split::kTest};

const char* split_name(Split split);
Split split_from_name(const std::string& name);

struct SplitRatios {
  double train = 0.90;
  double test = 0.06;
  double valid = 0.04;
};

struct DatasetOptions {
  int hr_height = 544;
  int hr_width = 960;
  int scale_factor = 4;
  SplitRatios ratios;
  std::size_t train_clips_per_video = 10;
  std::size_t train_clip_len = 15;
  int eval_clips_min = 1;
  int eval_clips_max = 4;
  std::size_t eval_clip_len = 7;
  bool synthesize_blur = true;
  int blur_order = 1;
  MaskParams mask;
  std::optional<DegradeConfig> degrade;  // LR = degrade(HR_blur) instead of bicubic
  FlowOptions flow;
  Seed seed = 0;
  int jobs = 1;
};

struct VideoRecord {
  std::string video_id;
  std::size_t frame_count = 0;
  int width = 0;   // source resolution
  int height = 0;
  Split split = Split::kTrain;
};

struct ClipBlurRecord {
  std::vector<BlurParams> passes;
  std::size_t blurred_frames = 0;
};

struct ClipRecord {
  std::string clip_id;
  std::string video_id;
  Split split = Split::kTrain;
  std::size_t start = 0;   // first source frame
  std::size_t length = 0;
  double mean_flow = 0.0;  // LR pixels per frame
  double gated_fraction = 0.0;
  std::optional<ClipBlurRecord> blur;
};

struct SplitTotals {
  std::size_t videos = 0;
  std::size_t clips = 0;
  std::size_t frames = 0;
  std::size_t clip_length = 0;  // required length of every clip in the split
};

struct DatasetManifest {
  int schema_version = kManifestSchemaVersion;
  int scale_factor = 4;
  int hr_width = 960;
  int hr_height = 544;
  int lr_width = 240;
  int lr_height = 136;
  Seed seed = 0;
  bool masks = false;
  SplitRatios ratios;
  std::vector<VideoRecord> videos;
  std::vector<ClipRecord> clips;
  std::array<SplitTotals, 3> totals{};

  SplitTotals& totals_for(Split s) { return totals[static_cast<int>(s)]; }
  const SplitTotals& totals_for(Split s) const { return totals[static_cast<int>(s)]; }
};

nlohmann::json to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const nlohmann::json& doc);

/// Largest-remainder video counts per split for `videos` videos.
std::array<std::size_t, 3> split_counts(std::size_t videos, const SplitRatios& ratios);

/// Seeded shuffle of video indices, then train / test / valid in that order.
std::vector<Split> assign_splits(std::size_t videos, const SplitRatios& ratios, Seed seed);

/// Recomputes per-split totals from the video and clip lists.
void recompute_totals(DatasetManifest& manifest);

struct ValidationReport {
  std::vector<std::string> issues;
  std::vector<Split> failing_splits;

  bool ok() const { return issues.empty(); }
  void add(std::optional<Split> split, std::string message);
};

/// Internal consistency: per-split frame and clip totals match the clip
/// list, clip lengths match the split's declared length, video counts match
/// the declared ratios, and clips of one video do not overlap.
ValidationReport validate_manifest(const DatasetManifest& manifest);

/// validate_manifest plus a scan of the output tree under `root`: every clip
/// directory holds the declared number of hr/lr(/mask) frames at the
/// declared resolutions.
ValidationReport validate_dataset(const fs::path& root);

/// Builds HR/LR/mask clips from `src/<video-id>/*.png` into
/// `out/<split>/<clip-id>/{hr,lr,mask}/%08d.png` and writes
/// `out/manifest.json`.
DatasetManifest build_dataset(const fs::path& src, const fs::path& out,
                              const DatasetOptions& options);

}  // namespace vsrsynth
