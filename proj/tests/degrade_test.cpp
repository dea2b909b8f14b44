#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "support.hpp"
#include "vsrsynth/degrade.hpp"
#include "vsrsynth/error.hpp"
#include "vsrsynth/image_ops.hpp"
#include "vsrsynth/jpeg.hpp"
#include "vsrsynth/metrics.hpp"

namespace vsrsynth {
namespace {

using nlohmann::json;

Errc error_code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected vsrsynth::Error";
  return Errc::kInvalidArgument;
}

double mean_abs_diff(const Frame& a, const Frame& b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.sample_count(); ++i) {
    total += std::fabs(static_cast<double>(a.data()[i]) - b.data()[i]);
  }
  return total / a.sample_count();
}

StageConfig all_off_stage() {
  StageConfig s;
  s.blur.probability = 0.0;
  s.resize.probability = 0.0;
  s.noise.probability = 0.0;
  s.noise.gaussian_sigma = {0.0, 0.0};
  s.noise.poisson_scale = {0.0, 0.0};
  s.jpeg.probability = 0.0;
  s.jpeg.quality = {100, 100};
  return s;
}

DegradeConfig fixed_config(Seed seed) {
  StageConfig a;
  a.blur.kernel_size = {7, 11};
  a.blur.sigma = {0.5, 1.5};
  a.resize.scale = {0.5, 1.0};
  a.noise.gaussian_sigma = {0.01, 0.03};
  a.noise.poisson_scale = {0.005, 0.02};
  a.jpeg.quality = {50, 90};
  StageConfig b = a;
  b.blur.probability = 0.5;
  DegradeConfig c;
  c.stages = {a, b};
  c.seed = seed;
  return c;
}

// ---- JPEG -----------------------------------------------------------------

TEST(JpegCycle, HighQualityKeepsMidGray) {
  const Frame gray(32, 48, 128.0f / 255.0f);
  const Frame out = jpeg_cycle(gray, 100);
  for (std::size_t i = 0; i < out.sample_count(); ++i) {
    ASSERT_LE(std::fabs(out.data()[i] - gray.data()[i]), 1.0f / 255.0f + 1e-6f);
  }
}

TEST(JpegCycle, RepeatedCompressionChangesLess) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Frame f = testing::textured_frame(64, 80, 300 + s);
    const Frame once = jpeg_cycle(f, 30);
    const Frame twice = jpeg_cycle(once, 30);
    EXPECT_LT(mean_abs_diff(once, twice), mean_abs_diff(f, once)) << "frame " << s;
  }
}

TEST(JpegCycle, PsnrFallsWithQuality) {
  const Frame f = testing::textured_frame(96, 128, 8);
  double prev = std::numeric_limits<double>::infinity();
  for (int q = 95; q >= 30; q -= 5) {
    const double v = psnr(f, jpeg_cycle(f, q));
    EXPECT_LE(v, prev + 1e-9) << "quality " << q;
    prev = v;
  }
}

TEST(JpegCycle, DeterministicAndValidated) {
  const Frame f = testing::random_frame(17, 23, 2);
  EXPECT_EQ(jpeg_cycle(f, 60), jpeg_cycle(f, 60));
  EXPECT_EQ(error_code_of([&] { jpeg_cycle(f, 0); }), Errc::kInvalidArgument);
  EXPECT_EQ(error_code_of([&] { jpeg_cycle(f, 101); }), Errc::kInvalidArgument);
  const Frame tiny = jpeg_cycle(Frame(1, 1, 0.5f), 75);
  EXPECT_EQ(tiny.height(), 1);
}

// ---- noise ----------------------------------------------------------------

TEST(AddNoise, ZeroStrengthIsIdentity) {
  const Frame f = testing::random_frame(8, 8, 1);
  EXPECT_EQ(add_noise(f, NoiseKind::kGaussian, 0.0, false, 3), f);
  EXPECT_EQ(add_noise(f, NoiseKind::kPoisson, 0.0, true, 3), f);
  EXPECT_EQ(error_code_of([&] { add_noise(f, NoiseKind::kGaussian, -0.1, false, 3); }),
            Errc::kInvalidArgument);
}

TEST(AddNoise, GaussianMomentsOnLargeFrame) {
  const Frame out = add_noise(Frame(256, 256, 0.5f), NoiseKind::kGaussian, 0.05, false, 42);
  double sum = 0.0, sq = 0.0;
  for (float v : out.data()) sum += v;
  const double mean = sum / out.sample_count();
  for (float v : out.data()) sq += (v - mean) * (v - mean);
  const double sd = std::sqrt(sq / (out.sample_count() - 1));
  EXPECT_NEAR(mean, 0.5, 0.003);
  EXPECT_NEAR(sd, 0.05, 0.005);
}

TEST(AddNoise, PoissonVarianceFollowsSignal) {
  for (float level : {0.1f, 0.4f, 0.8f}) {
    const Frame out = add_noise(Frame(128, 128, level), NoiseKind::kPoisson, 0.01, false, 7);
    double sum = 0.0, sq = 0.0;
    for (float v : out.data()) sum += v;
    const double mean = sum / out.sample_count();
    for (float v : out.data()) sq += (v - mean) * (v - mean);
    const double var = sq / (out.sample_count() - 1);
    EXPECT_NEAR(var, 0.01 * level, 0.1 * 0.01 * level) << level;
  }
}

TEST(AddNoise, GrayModeSharesTheDraw) {
  const Frame f = testing::random_frame(20, 20, 6);
  for (NoiseKind kind : {NoiseKind::kGaussian, NoiseKind::kPoisson}) {
    const Frame flat(20, 20, 0.5f);
    const Frame out = add_noise(flat, kind, 0.03, true, 11);
    for (int y = 0; y < 20; ++y)
      for (int x = 0; x < 20; ++x) {
        ASSERT_EQ(out.at(y, x, 0), out.at(y, x, 1));
        ASSERT_EQ(out.at(y, x, 1), out.at(y, x, 2));
      }
    // On a colored frame the per-channel offsets still coincide (gaussian).
    if (kind == NoiseKind::kGaussian) {
      const Frame noisy = add_noise(f, kind, 0.01, true, 12);
      for (int y = 0; y < 20; ++y)
        for (int x = 0; x < 20; ++x) {
          const float d0 = noisy.at(y, x, 0) - f.at(y, x, 0);
          const float d1 = noisy.at(y, x, 1) - f.at(y, x, 1);
          if (noisy.at(y, x, 0) > 0 && noisy.at(y, x, 0) < 1 && noisy.at(y, x, 1) > 0 &&
              noisy.at(y, x, 1) < 1) {
            ASSERT_NEAR(d0, d1, 1e-6);
          }
        }
    }
  }
}

TEST(AddNoise, SeededAndRangeClosed) {
  const Frame f = testing::random_frame(30, 30, 9);
  const Frame a = add_noise(f, NoiseKind::kGaussian, 0.2, false, 5);
  EXPECT_EQ(a, add_noise(f, NoiseKind::kGaussian, 0.2, false, 5));
  EXPECT_NE(a, add_noise(f, NoiseKind::kGaussian, 0.2, false, 6));
  for (float v : a.data()) {
    ASSERT_GE(v, 0.0f);
    ASSERT_LE(v, 1.0f);
  }
}

// ---- chain ----------------------------------------------------------------

TEST(DegradeFrame, OutputIsQuarterResolution) {
  const Frame f = testing::textured_frame(64, 96, 3);
  for (Seed s = 0; s < 8; ++s) {
    const DegradeResult r = degrade_frame(f, fixed_config(s));
    EXPECT_EQ(r.frame.height(), 16);
    EXPECT_EQ(r.frame.width(), 24);
  }
  DegradeConfig defaults;
  defaults.seed = 4;
  EXPECT_EQ(degrade_frame(f, defaults).frame.height(), 16);
}

TEST(DegradeFrame, NonDivisibleInputRejected) {
  EXPECT_EQ(error_code_of([] { degrade_frame(Frame(30, 32), DegradeConfig{}); }), Errc::kInvalidArgument);
}

TEST(DegradeFrame, SameSeedSameOutputAndTrace) {
  const Frame f = testing::textured_frame(48, 64, 5);
  const DegradeResult a = degrade_frame(f, fixed_config(21));
  const DegradeResult b = degrade_frame(f, fixed_config(21));
  EXPECT_EQ(a.frame, b.frame);
  EXPECT_EQ(to_json(a.trace), to_json(b.trace));
  EXPECT_NE(to_json(a.trace), to_json(degrade_frame(f, fixed_config(22)).trace));
}

TEST(DegradeFrame, TraceReplayIsExactIncludingThroughJson) {
  const Frame f = testing::textured_frame(48, 64, 6);
  for (Seed s = 0; s < 6; ++s) {
    const DegradeResult r = degrade_frame(f, fixed_config(s));
    EXPECT_EQ(replay_trace(f, r.trace), r.frame);
    const json doc = json::parse(to_json(r.trace).dump());
    EXPECT_EQ(replay_trace(f, degrade_trace_from_json(doc)), r.frame);
  }
}

TEST(DegradeFrame, AllStagesOffIsPlainBicubic) {
  const Frame f = testing::textured_frame(40, 56, 7);
  DegradeConfig c;
  c.stages = {all_off_stage(), all_off_stage()};
  EXPECT_EQ(degrade_frame(f, c).frame, resize_bicubic(f, 10, 14));
}

TEST(DegradeFrame, LosslessishJpegStaysCloseToBicubic) {
  const Frame f = testing::textured_frame(64, 64, 8);
  StageConfig s = all_off_stage();
  s.jpeg.probability = 1.0;
  DegradeConfig c;
  c.stages = {s, s};
  EXPECT_GE(psnr(degrade_frame(f, c).frame, resize_bicubic(f, 16, 16)), 45.0);
}

TEST(DegradeFrame, ZeroSigmaNoiseStageIsIdentity) {
  const Frame f = testing::textured_frame(32, 32, 9);
  StageConfig s = all_off_stage();
  s.noise.probability = 1.0;
  s.noise.gaussian_probability = 1.0;
  DegradeConfig c;
  c.stages = {s};
  const DegradeResult r = degrade_frame(f, c);
  EXPECT_TRUE(r.trace.stages[0].noise.applied);
  EXPECT_EQ(r.frame, resize_bicubic(f, 8, 8));
}

// ---- config ---------------------------------------------------------------

TEST(DegradeConfigJson, RoundTrip) {
  const DegradeConfig c = fixed_config(77);
  EXPECT_EQ(degrade_config_from_json(to_json(c)), c);
  EXPECT_EQ(degrade_config_from_json(json::object()), DegradeConfig{});
}

TEST(DegradeConfigJson, OrderReplicatesSingleStage) {
  const json doc = {{"order", 3}, {"stages", {{{"jpeg", {{"quality", {40, 60}}}}}}}};
  const DegradeConfig c = degrade_config_from_json(doc);
  ASSERT_EQ(c.stages.size(), 3u);
  EXPECT_EQ(c.stages[2].jpeg.quality, (IntRange{40, 60}));
}

TEST(DegradeConfigJson, RejectsBadDocuments) {
  const auto code = [](const json& doc) { return error_code_of([&] { degrade_config_from_json(doc); }); };
  EXPECT_EQ(code({{"bogus", 1}}), Errc::kInvalidConfig);
  EXPECT_EQ(code({{"stages", {{{"blur", {{"probability", 1.5}}}}}}}), Errc::kInvalidConfig);
  EXPECT_EQ(code({{"stages", {{{"jpeg", {{"quality", {0, 50}}}}}}}}), Errc::kInvalidConfig);
  EXPECT_EQ(code({{"stages", {{{"blur", {{"kernel_size", {6, 21}}}}}}}}), Errc::kInvalidConfig);
  EXPECT_EQ(code({{"stages", {{{"resize", {{"mode", "lanczos"}}}}}}}), Errc::kInvalidConfig);
  EXPECT_EQ(code({{"stages", json::array()}}), Errc::kInvalidConfig);
  EXPECT_EQ(code({{"order", 3}, {"stages", {json::object(), json::object()}}}), Errc::kInvalidConfig);
  EXPECT_EQ(code({{"stages", {{{"noise", {{"gaussian_sigma", "wide"}}}}}}}), Errc::kInvalidConfig);
}

}  // namespace
}  // namespace vsrsynth
