#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "vsrsynth/frame.hpp"
#include "vsrsynth/random.hpp"

namespace vsrsynth {

/// Parameters of the multi-frame stacking model.
///
/// `n_frames` neighbors (odd, 3/5/7) are linearly stacked with coefficient
/// `r` in [0, 1/n_frames]; each eligible frame is blurred with probability
/// `p` in (0.5, 1]. `order` 2 runs a second, independently parameterized
/// pass over the output of the first.
struct BlurParams {
  int n_frames = 3;
  double r = 0.0;
  double p = 1.0;
  int order = 1;
  Seed seed = 0;

  friend bool operator==(const BlurParams&, const BlurParams&) = default;
};

/// Throws kInvalidArgument naming the offending field.
void validate(const BlurParams& params);

/// N uniform over {3,5,7}, r uniform over [0, 1/N), p = 1 - 0.5u (so p in
/// (0.5, 1]); order 1 and `seed` carried through. Pure function of `seed`.
BlurParams sample_params(Seed seed);

/// Indices (0-based, inclusive) a pass may blur for a clip of length n:
/// [ceil(N/2) - 1, n - ceil(N/2) - 1]. Empty when the clip is too short.
std::optional<std::pair<std::size_t, std::size_t>> eligible_range(std::size_t n, int n_frames);

/// Weighted stack of the N-frame window centered on `t`, *without* the final
/// clamp: sum_j r*x_j + (1 - N r)*x_t. Samples are computed in double and
/// rounded to float.
std::vector<float> stack_frame_unclamped(std::span<const ImageView> frames, std::size_t t,
                                         int n_frames, double r);

/// Clamped stack of the window around `t`. Requires
/// floor(N/2) <= t <= n - 1 - floor(N/2).
Frame stack_frame(const Clip& clip, std::size_t t, int n_frames, double r);

struct BlurPass {
  BlurParams params;
  std::vector<bool> applied;
};

struct BlurOutcome {
  Clip clip;
  /// Frame was re-synthesized by at least one pass.
  std::vector<bool> applied;
  std::vector<BlurPass> passes;
};

/// Parameters each pass uses: pass 0 takes `params` as given, pass 1 (order 2)
/// draws sample_params from a stream derived from `params.seed`.
std::vector<BlurParams> pass_params(const BlurParams& params);

/// Runs the stacking model over a clip. Boundary frames are copied; each
/// eligible frame is replaced with probability p by an independent draw keyed
/// on (seed, pass, frame index), so output is independent of `jobs`.
BlurOutcome synthesize_clip(const Clip& clip, const BlurParams& params, int jobs = 1);

/// Buffer-level form for callers that own their memory (e.g. host-language
/// bindings): reads `frames`, writes each result into the matching `outputs`
/// span (same length as the source frame; may not alias inputs).
std::vector<BlurPass> synthesize_into(std::span<const ImageView> frames, const BlurParams& params,
                                      std::span<const std::span<float>> outputs, int jobs = 1);

}  // namespace vsrsynth
