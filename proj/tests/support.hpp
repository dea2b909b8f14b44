#pragma once

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "vsrsynth/frame.hpp"
#include "vsrsynth/random.hpp"

namespace vsrsynth::testing {

inline Frame random_frame(int h, int w, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<float> d(static_cast<std::size_t>(h) * w * 3);
  for (float& v : d) v = static_cast<float>(rng.uniform());
  return Frame(h, w, std::move(d));
}

inline GrayMap random_map(int h, int w, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  Rng rng(seed);
  std::vector<float> d(static_cast<std::size_t>(h) * w);
  for (float& v : d) v = static_cast<float>(rng.uniform(lo, hi));
  return GrayMap(h, w, std::move(d));
}

inline Clip random_clip(std::size_t n, int h, int w, std::uint64_t seed) {
  std::vector<Frame> frames;
  for (std::size_t i = 0; i < n; ++i) frames.push_back(random_frame(h, w, seed * 1000 + i));
  return Clip(std::move(frames));
}

/// Smooth natural-looking texture: a few sinusoids plus mild noise.
inline Frame textured_frame(int h, int w, std::uint64_t seed, double dx = 0.0, double dy = 0.0) {
  Rng rng(seed);
  double fx[4], fy[4], ph[4];
  for (int i = 0; i < 4; ++i) {
    fx[i] = rng.uniform(0.02, 0.25);
    fy[i] = rng.uniform(0.02, 0.25);
    ph[i] = rng.uniform(0.0, 6.28);
  }
  std::vector<float> d(static_cast<std::size_t>(h) * w * 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        double v = 0.5;
        for (int i = 0; i < 4; ++i) {
          v += 0.1 * std::sin(fx[i] * (x - dx) * (1 + 0.1 * c) + fy[i] * (y - dy) + ph[i]);
        }
        d[(static_cast<std::size_t>(y) * w + x) * 3 + c] = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
    }
  }
  return Frame(h, w, std::move(d));
}

inline Frame constant_frame(int h, int w, float v) { return Frame(h, w, v); }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("vsrsynth_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

}  // namespace vsrsynth::testing
