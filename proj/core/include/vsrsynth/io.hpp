#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vsrsynth/frame.hpp"

namespace vsrsynth {

namespace fs = std::filesystem;

struct PngInfo {
  int width = 0;
  int height = 0;
  int bit_depth = 0;
  int color_type = 0;  // PNG IHDR color type: 0 gray, 2 RGB, 3 palette, 4 gray+alpha, 6 RGBA
};

/// Parses the IHDR chunk only. Throws kFileNotFound / kUnsupportedFormat.
PngInfo read_png_info(const fs::path& path);

/// Loads an 8-bit RGB PNG; sample v becomes v/255.
Frame load_frame(const fs::path& path);
/// Writes an 8-bit RGB PNG with round-half-away-from-zero quantization.
void save_frame(const Frame& frame, const fs::path& path);

/// 8-bit grayscale PNG, 255 <-> 1.0.
GrayMap load_mask(const fs::path& path);
void save_mask(const GrayMap& mask, const fs::path& path);

/// The 8-bit code a sample is written as.
unsigned char quantize_sample(float v);
/// Snap every sample to the nearest 8-bit level (what a PNG round trip yields).
Frame quantize(const Frame& frame);

/// `%08d.png`
std::string frame_filename(std::size_t index);

/// Sorted list of *.png files directly inside `dir`.
std::vector<fs::path> list_frame_files(const fs::path& dir);

Clip load_clip(const fs::path& dir);
/// Writes frames as dir/%08d.png, creating `dir` as needed.
void save_clip(const Clip& clip, const fs::path& dir);

/// Clip directories under `root`: `root` itself when it directly holds PNG
/// frames, otherwise every immediate subdirectory that does (sorted).
std::vector<fs::path> discover_clip_dirs(const fs::path& root);

}  // namespace vsrsynth
