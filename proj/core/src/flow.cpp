#include "vsrsynth/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vsrsynth/error.hpp"
#include "vsrsynth/image_ops.hpp"
#include "vsrsynth/parallel.hpp"

namespace vsrsynth {
namespace {

// Luma of `frame` with `pad` replicated pixels on every side.
std::vector<float> padded_luma(const Frame& frame, int pad, int& stride) {
  const auto y = luminance(frame);
  const int h = frame.height();
  const int w = frame.width();
  stride = w + 2 * pad;
  std::vector<float> out(static_cast<std::size_t>(h + 2 * pad) * stride);
  for (int r = -pad; r < h + pad; ++r) {
    const int sr = std::clamp(r, 0, h - 1);
    float* dst = out.data() + static_cast<std::size_t>(r + pad) * stride;
    for (int c = -pad; c < w + pad; ++c) {
      dst[c + pad] = y[static_cast<std::size_t>(sr) * w + std::clamp(c, 0, w - 1)];
    }
  }
  return out;
}

}  // namespace

double estimate_flow_magnitude(const Frame& a, const Frame& b, const FlowOptions& options) {
  require_same_shape(a.view(), b.view(), "estimate_flow_magnitude");
  if (options.block < 1 || options.radius < 0) {
    fail(Errc::kInvalidArgument, "flow block must be >= 1 and radius >= 0");
  }
  const int h = a.height();
  const int w = a.width();
  const int bh = std::min(options.block, h);
  const int bw = std::min(options.block, w);
  const int radius = options.radius;

  const auto ya = luminance(a);
  int stride = 0;
  const auto yb = padded_luma(b, radius, stride);

  double total = 0.0;
  std::size_t blocks = 0;
  for (int by = 0; by + bh <= h; by += bh) {
    for (int bx = 0; bx + bw <= w; bx += bw) {
      double best_sad = std::numeric_limits<double>::infinity();
      int best_d2 = 0;
      for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          const int d2 = dy * dy + dx * dx;
          double sad = 0.0;
          for (int r = 0; r < bh && sad <= best_sad; ++r) {
            const float* pa = ya.data() + static_cast<std::size_t>(by + r) * w + bx;
            const float* pb = yb.data() +
                              static_cast<std::size_t>(by + r + dy + radius) * stride +
                              (bx + dx + radius);
            float row = 0.0f;
            for (int c = 0; c < bw; ++c) row += std::abs(pa[c] - pb[c]);
            sad += row;
          }
          if (sad < best_sad || (sad == best_sad && d2 < best_d2)) {
            best_sad = sad;
            best_d2 = d2;
          }
        }
      }
      total += std::sqrt(static_cast<double>(best_d2));
      ++blocks;
    }
  }
  return blocks == 0 ? 0.0 : total / static_cast<double>(blocks);
}

FlowStats compute_flow_stats(std::span<const Frame> frames, const FlowOptions& options, int jobs) {
  FlowStats stats;
  if (frames.size() < 2) return stats;
  stats.pair_magnitudes.resize(frames.size() - 1);
  parallel_for(stats.pair_magnitudes.size(), jobs, [&](std::size_t i) {
    stats.pair_magnitudes[i] = estimate_flow_magnitude(frames[i], frames[i + 1], options);
  });
  double total = 0.0;
  for (double m : stats.pair_magnitudes) total += m;
  stats.mean = total / static_cast<double>(stats.pair_magnitudes.size());
  return stats;
}

std::vector<ClipWindow> rank_windows(std::size_t video_length, const FlowStats& flow,
                                     std::size_t clip_len) {
  if (clip_len < 1) fail(Errc::kInvalidArgument, "clip length must be >= 1");
  if (video_length < clip_len) {
    fail(Errc::kInsufficientFrames, "video of " + std::to_string(video_length) +
                                        " frames is shorter than clip length " +
                                        std::to_string(clip_len));
  }
  if (video_length > 1 && flow.pair_magnitudes.size() != video_length - 1) {
    fail(Errc::kDimensionMismatch, "flow stats must hold one magnitude per consecutive frame pair");
  }
  std::vector<ClipWindow> windows;
  for (std::size_t s = 0; s + clip_len <= video_length; ++s) {
    double m = 0.0;
    if (clip_len == 1) {
      if (!flow.pair_magnitudes.empty()) {
        m = flow.pair_magnitudes[std::min(s, flow.pair_magnitudes.size() - 1)];
      }
    } else {
      for (std::size_t i = s; i + 1 < s + clip_len; ++i) m += flow.pair_magnitudes[i];
      m /= static_cast<double>(clip_len - 1);
    }
    windows.push_back({s, clip_len, m});
  }
  return windows;
}

std::vector<ClipWindow> select_clips(std::size_t video_length, const FlowStats& flow,
                                     ClipPolicy policy, std::size_t count, std::size_t clip_len,
                                     Seed seed) {
  auto windows = rank_windows(video_length, flow, clip_len);
  if (count * clip_len > video_length) {
    fail(Errc::kInsufficientFrames, "cannot fit " + std::to_string(count) + " clips of " +
                                        std::to_string(clip_len) + " frames in " +
                                        std::to_string(video_length) + " frames");
  }
  if (count == 0) return {};

  // Rank: ascending flow for train, descending for eval; start breaks ties.
  std::vector<ClipWindow> ranked = windows;
  std::stable_sort(ranked.begin(), ranked.end(), [&](const ClipWindow& x, const ClipWindow& y) {
    return policy == ClipPolicy::kTrain ? x.mean_flow < y.mean_flow : x.mean_flow > y.mean_flow;
  });
  const std::size_t n = ranked.size();
  const std::size_t cut = policy == ClipPolicy::kTrain ? (n + 1) / 2 : (n + 3) / 4;
  const double threshold = ranked[cut - 1].mean_flow;

  std::vector<ClipWindow> pool;
  std::vector<ClipWindow> rest;
  for (const ClipWindow& win : ranked) {
    const bool inside = policy == ClipPolicy::kTrain ? win.mean_flow <= threshold
                                                     : win.mean_flow >= threshold;
    (inside ? pool : rest).push_back(win);
  }
  std::sort(pool.begin(), pool.end(),
            [](const ClipWindow& x, const ClipWindow& y) { return x.start < y.start; });
  Rng rng(derive_seed(seed, {tag(Stream::kClipSelect)}));
  for (std::size_t i = pool.size(); i > 1; --i) {
    std::swap(pool[i - 1], pool[rng.below(i)]);
  }

  std::vector<ClipWindow> chosen;
  // Windows of clip_len that still fit in the gaps between picks.
  auto capacity = [&](const std::vector<ClipWindow>& picks) {
    std::vector<ClipWindow> sorted = picks;
    std::sort(sorted.begin(), sorted.end(),
              [](const ClipWindow& x, const ClipWindow& y) { return x.start < y.start; });
    std::size_t free_from = 0;
    std::size_t fit = 0;
    for (const ClipWindow& c : sorted) {
      fit += (c.start - free_from) / clip_len;
      free_from = c.end();
    }
    return fit + (video_length - free_from) / clip_len;
  };
  auto take = [&](const ClipWindow& win) {
    for (const ClipWindow& c : chosen) {
      if (win.start < c.end() && c.start < win.end()) return;
    }
    chosen.push_back(win);
    if (capacity(chosen) < count - chosen.size()) chosen.pop_back();
  };
  // A pick is only kept if the rest of the request still fits, so every
  // sweep adds at least one window.
  while (chosen.size() < count) {
    const std::size_t before = chosen.size();
    for (const std::vector<ClipWindow>* list : {&pool, &rest}) {
      for (const ClipWindow& win : *list) {
        if (chosen.size() == count) break;
        take(win);
      }
    }
    if (chosen.size() == before) break;
  }
  if (chosen.size() < count) {
    fail(Errc::kInsufficientFrames, "only " + std::to_string(chosen.size()) +
                                        " non-overlapping clips available, " +
                                        std::to_string(count) + " requested");
  }
  std::sort(chosen.begin(), chosen.end(),
            [](const ClipWindow& x, const ClipWindow& y) { return x.start < y.start; });
  return chosen;
}

}  // namespace vsrsynth
