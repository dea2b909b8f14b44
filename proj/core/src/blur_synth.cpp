#include "vsrsynth/blur_synth.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "vsrsynth/error.hpp"
#include "vsrsynth/parallel.hpp"

namespace vsrsynth {
namespace {

constexpr std::size_t kChunk = 4096;

void check_window(std::size_t n, std::size_t t, int n_frames) {
  const std::size_t half = static_cast<std::size_t>(n_frames / 2);
  if (t < half || t + half >= n) {
    fail(Errc::kOutOfRange, "frame index " + std::to_string(t) + " has no full " +
                                std::to_string(n_frames) + "-frame window in a clip of " +
                                std::to_string(n));
  }
}

void check_frames(std::span<const ImageView> frames) {
  if (frames.empty()) fail(Errc::kInvalidArgument, "no frames");
  for (const ImageView& f : frames) {
    require_same_shape(frames.front(), f, "blur synthesis");
    if (f.data.size() != f.pixel_count() * static_cast<std::size_t>(f.channels)) {
      fail(Errc::kDimensionMismatch, "frame buffer length does not match its shape");
    }
  }
}

void stack_into(std::span<const ImageView> frames, std::size_t t, int n_frames, double r,
                std::span<float> out) {
  const std::size_t half = static_cast<std::size_t>(n_frames / 2);
  const double center_weight = 1.0 - n_frames * r;
  const std::size_t total = frames[t].data.size();
  std::array<double, kChunk> acc{};
  for (std::size_t base = 0; base < total; base += kChunk) {
    const std::size_t len = std::min(kChunk, total - base);
    const float* center = frames[t].data.data() + base;
    for (std::size_t s = 0; s < len; ++s) acc[s] = center_weight * center[s];
    for (std::size_t j = t - half; j <= t + half; ++j) {
      const float* src = frames[j].data.data() + base;
      for (std::size_t s = 0; s < len; ++s) acc[s] += r * src[s];
    }
    for (std::size_t s = 0; s < len; ++s) out[base + s] = static_cast<float>(acc[s]);
  }
}

void clamp_unit(std::span<float> values) {
  for (float& v : values) v = std::clamp(v, 0.0f, 1.0f);
}

BlurPass run_pass(std::span<const ImageView> in, const BlurParams& params, std::uint64_t pass,
                  Seed stream_seed, std::span<const std::span<float>> out, int jobs) {
  const std::size_t n = in.size();
  BlurPass record{params, std::vector<bool>(n, false)};
  const auto range = eligible_range(n, params.n_frames);
  std::vector<char> fired(n, 0);
  if (range) {
    for (std::size_t i = range->first; i <= range->second; ++i) {
      Rng rng(derive_seed(stream_seed, {tag(Stream::kBernoulli), pass, i}));
      fired[i] = rng.bernoulli(params.p) ? 1 : 0;
    }
  }
  parallel_for(n, jobs, [&](std::size_t i) {
    if (fired[i]) {
      stack_into(in, i, params.n_frames, params.r, out[i]);
      clamp_unit(out[i]);
    } else {
      std::copy(in[i].data.begin(), in[i].data.end(), out[i].begin());
    }
  });
  for (std::size_t i = 0; i < n; ++i) record.applied[i] = fired[i] != 0;
  return record;
}

}  // namespace

void validate(const BlurParams& params) {
  if (params.n_frames != 3 && params.n_frames != 5 && params.n_frames != 7) {
    fail(Errc::kInvalidArgument,
         "n_frames must be one of {3,5,7}, got " + std::to_string(params.n_frames));
  }
  if (!(params.r >= 0.0 && params.r <= 1.0 / params.n_frames)) {
    fail(Errc::kInvalidArgument, "r must lie in [0, 1/n_frames], got " + std::to_string(params.r));
  }
  if (!(params.p > 0.5 && params.p <= 1.0)) {
    fail(Errc::kInvalidArgument, "p must lie in (0.5, 1], got " + std::to_string(params.p));
  }
  if (params.order != 1 && params.order != 2) {
    fail(Errc::kInvalidArgument, "order must be 1 or 2, got " + std::to_string(params.order));
  }
}

BlurParams sample_params(Seed seed) {
  static constexpr std::array<int, 3> kFrameCounts = {3, 5, 7};
  Rng rng(derive_seed(seed, {tag(Stream::kBlurParams)}));
  BlurParams params;
  params.n_frames = kFrameCounts[rng.below(kFrameCounts.size())];
  params.r = rng.uniform() * (1.0 / params.n_frames);
  params.p = 1.0 - 0.5 * rng.uniform();
  params.order = 1;
  params.seed = seed;
  return params;
}

std::optional<std::pair<std::size_t, std::size_t>> eligible_range(std::size_t n, int n_frames) {
  const std::size_t ceil_half = static_cast<std::size_t>((n_frames + 1) / 2);
  if (n < 2 * ceil_half) return std::nullopt;
  const std::size_t first = ceil_half - 1;
  const std::size_t last = n - ceil_half - 1;
  if (last < first) return std::nullopt;
  return std::pair{first, last};
}

std::vector<float> stack_frame_unclamped(std::span<const ImageView> frames, std::size_t t,
                                         int n_frames, double r) {
  validate(BlurParams{n_frames, r, 1.0, 1, 0});
  check_frames(frames);
  check_window(frames.size(), t, n_frames);
  std::vector<float> out(frames[t].data.size());
  stack_into(frames, t, n_frames, r, out);
  return out;
}

Frame stack_frame(const Clip& clip, std::size_t t, int n_frames, double r) {
  std::vector<ImageView> views;
  views.reserve(clip.size());
  for (const Frame& f : clip.frames()) views.push_back(f.view());
  return Frame::clamped(clip.height(), clip.width(),
                        stack_frame_unclamped(views, t, n_frames, r));
}

std::vector<BlurParams> pass_params(const BlurParams& params) {
  validate(params);
  std::vector<BlurParams> passes{params};
  passes.front().order = 1;
  if (params.order == 2) {
    passes.push_back(sample_params(derive_seed(params.seed, {tag(Stream::kSecondPass)})));
  }
  return passes;
}

std::vector<BlurPass> synthesize_into(std::span<const ImageView> frames, const BlurParams& params,
                                      std::span<const std::span<float>> outputs, int jobs) {
  const auto plan = pass_params(params);
  check_frames(frames);
  if (outputs.size() != frames.size()) {
    fail(Errc::kDimensionMismatch, "output count does not match frame count");
  }
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (outputs[i].size() != frames[i].data.size()) {
      fail(Errc::kDimensionMismatch, "output buffer size does not match frame size");
    }
  }
  if (frames.size() < static_cast<std::size_t>(params.n_frames)) {
    fail(Errc::kInsufficientFrames, "clip of " + std::to_string(frames.size()) +
                                        " frames is shorter than n_frames=" +
                                        std::to_string(params.n_frames));
  }

  std::vector<BlurPass> passes;
  if (plan.size() == 1) {
    passes.push_back(run_pass(frames, plan[0], 0, params.seed, outputs, jobs));
    return passes;
  }

  // Order 2: the first pass writes to scratch, the second reads it.
  std::vector<std::vector<float>> scratch(frames.size());
  std::vector<std::span<float>> scratch_spans;
  std::vector<ImageView> scratch_views;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    scratch[i].resize(frames[i].data.size());
    scratch_spans.emplace_back(scratch[i]);
  }
  passes.push_back(run_pass(frames, plan[0], 0, params.seed, scratch_spans, jobs));
  for (std::size_t i = 0; i < frames.size(); ++i) {
    scratch_views.push_back({frames[i].height, frames[i].width, frames[i].channels, scratch[i]});
  }
  const auto& second = plan[1];
  if (frames.size() >= static_cast<std::size_t>(second.n_frames)) {
    passes.push_back(run_pass(scratch_views, second, 1, params.seed, outputs, jobs));
  } else {
    // Too short for the second draw's window: it leaves every frame untouched.
    for (std::size_t i = 0; i < frames.size(); ++i) {
      std::copy(scratch[i].begin(), scratch[i].end(), outputs[i].begin());
    }
    passes.push_back({second, std::vector<bool>(frames.size(), false)});
  }
  return passes;
}

BlurOutcome synthesize_clip(const Clip& clip, const BlurParams& params, int jobs) {
  std::vector<ImageView> views;
  views.reserve(clip.size());
  for (const Frame& f : clip.frames()) views.push_back(f.view());

  std::vector<std::vector<float>> buffers(clip.size());
  std::vector<std::span<float>> spans;
  for (std::size_t i = 0; i < clip.size(); ++i) {
    buffers[i].resize(clip[i].sample_count());
    spans.emplace_back(buffers[i]);
  }
  auto passes = synthesize_into(views, params, spans, jobs);

  std::vector<Frame> frames;
  frames.reserve(clip.size());
  for (auto& b : buffers) frames.push_back(Frame::clamped(clip.height(), clip.width(), std::move(b)));

  std::vector<bool> applied(clip.size(), false);
  for (const auto& pass : passes) {
    for (std::size_t i = 0; i < applied.size(); ++i) applied[i] = applied[i] || pass.applied[i];
  }
  return {Clip(std::move(frames), clip.fps()), std::move(applied), std::move(passes)};
}

}  // namespace vsrsynth
