#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vsrsynth/frame.hpp"
#include "vsrsynth/random.hpp"

namespace vsrsynth {

struct FlowOptions {
  int block = 16;   // square luma blocks
  int radius = 8;   // exhaustive search window, +-radius pixels
};

/// Mean block-matching displacement magnitude (pixels) from `a` to `b`.
///
/// Every full block of `a`'s BT.601 luma is matched against `b` over all
/// integer offsets within the radius by sum of absolute differences; pixels
/// of `b` outside the frame replicate the edge. Ties prefer the shorter
/// displacement, then the first in scan order, so identical frames give 0.
double estimate_flow_magnitude(const Frame& a, const Frame& b, const FlowOptions& options = {});

struct FlowStats {
  std::vector<double> pair_magnitudes;  // [i] is frame i -> i+1
  double mean = 0.0;
};

FlowStats compute_flow_stats(std::span<const Frame> frames, const FlowOptions& options = {},
                             int jobs = 1);

enum class ClipPolicy {
  kTrain,  // low-motion half of windows
  kEval,   // fast-motion upper quartile
};

struct ClipWindow {
  std::size_t start = 0;
  std::size_t length = 0;
  double mean_flow = 0.0;

  std::size_t end() const { return start + length; }
  friend bool operator==(const ClipWindow&, const ClipWindow&) = default;
};

/// Mean pair flow inside every window [s, s + clip_len), for each start s.
std::vector<ClipWindow> rank_windows(std::size_t video_length, const FlowStats& flow,
                                     std::size_t clip_len);

/// Picks `count` non-overlapping windows, sorted by start.
///
/// Candidates are the windows whose mean flow lies in the lower half of the
/// ranking (train) or the upper quartile (eval), ties at the cut included.
/// They are drawn in a seeded uniform order and taken greedily when they do
/// not overlap an earlier pick and leave room for the rest of the request;
/// if that leaves the request short, the remaining windows are considered in
/// rank order. Throws kInsufficientFrames if the video cannot hold `count`
/// windows.
std::vector<ClipWindow> select_clips(std::size_t video_length, const FlowStats& flow,
                                     ClipPolicy policy, std::size_t count, std::size_t clip_len,
                                     Seed seed);

}  // namespace vsrsynth
