#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "support.hpp"
#include "vsrsynth/error.hpp"
#include "vsrsynth/image_ops.hpp"
#include "vsrsynth/mask_gt.hpp"

namespace vsrsynth {
namespace {

Errc error_code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected vsrsynth::Error";
  return Errc::kInvalidArgument;
}

double center_weight_7x7_sigma3() {
  double total = 0.0;
  for (int y = -3; y <= 3; ++y)
    for (int x = -3; x <= 3; ++x) total += std::exp(-(x * x + y * y) / 18.0);
  return 1.0 / total;
}

Frame with_pixel(const Frame& base, int y, int x, float delta) {
  std::vector<float> d(base.data().begin(), base.data().end());
  for (int c = 0; c < 3; ++c) d[(static_cast<std::size_t>(y) * base.width() + x) * 3 + c] += delta;
  return Frame(base.height(), base.width(), std::move(d));
}

TEST(ResidualMap, IdenticalFramesGiveZero) {
  const Frame f = testing::random_frame(6, 9, 2);
  const ScalarMap r = residual_map(f, f, 100.0);
  for (double v : r.data) EXPECT_EQ(v, 0.0);
}

TEST(ResidualMap, HandEvaluatedSinglePixel) {
  const Frame a(5, 5, 0.4f);
  const Frame b = with_pixel(a, 2, 3, 0.1f);
  const double d = static_cast<double>(b.at(2, 3, 0)) - a.at(2, 3, 0);
  const ScalarMap r100 = residual_map(a, b, 100.0);
  const ScalarMap r10 = residual_map(a, b, 10.0);
  EXPECT_NEAR(r100.at(2, 3), 1.0, 1e-5);
  EXPECT_NEAR(r100.at(2, 3), 100.0 * d * d, 1e-12);
  EXPECT_NEAR(r10.at(2, 3), 0.1, 1e-6);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x)
      if (y != 2 || x != 3) EXPECT_EQ(r100.at(y, x), 0.0);
}

TEST(ResidualMap, IsUnclampedAndChannelAveraged) {
  const Frame a(1, 1, std::vector<float>{0.0f, 0.0f, 0.0f});
  const Frame b(1, 1, std::vector<float>{1.0f, 0.5f, 0.0f});
  EXPECT_NEAR(residual_map(a, b, 100.0).at(0, 0), 100.0 * (1.0 + 0.25) / 3.0, 1e-9);
}

TEST(ResidualMap, ShapeMismatchRejected) {
  EXPECT_EQ(error_code_of([] { residual_map(Frame(2, 2), Frame(2, 3), 1.0); }), Errc::kDimensionMismatch);
}

TEST(MakeMaskGt, IdenticalPairIsAllOnesAndUngated) {
  const Frame f = testing::random_frame(32, 48, 9);
  for (double k : {10.0, 100.0, 1000.0}) {
    MaskParams p;
    p.k = k;
    const MaskPair m = make_mask_gt(f, f, p);
    EXPECT_FALSE(m.gated);
    EXPECT_EQ(m.mask_gt.height(), 8);
    EXPECT_EQ(m.mask_gt.width(), 12);
    for (float v : m.mask_gt.data()) ASSERT_EQ(v, 1.0f);
  }
}

TEST(MakeMaskGt, SaturatingPairIsAllZerosAndGated) {
  const Frame clear(16, 16, 0.2f);
  const Frame blur(16, 16, 0.35f);
  const MaskPair m = make_mask_gt(clear, blur);
  EXPECT_TRUE(m.gated);
  for (float v : m.mask_gt.data()) ASSERT_EQ(v, 0.0f);
}

TEST(MakeMaskGt, MatchesBruteForcePipeline) {
  const Frame clear = testing::textured_frame(24, 32, 4);
  const Frame blur = testing::textured_frame(24, 32, 4, 1.5, 0.5);
  const MaskParams p;
  const MaskPair m = make_mask_gt(clear, blur, p);
  const Frame cl = resize_bicubic(clear, 6, 8);
  const Frame bl = resize_bicubic(blur, 6, 8);
  // Clamped residual, dense 7x7 Gaussian with replicate edges, then 1 - x.
  std::vector<double> res(6 * 8);
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 8; ++x) {
      double acc = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double d = static_cast<double>(cl.at(y, x, c)) - bl.at(y, x, c);
        acc += d * d;
      }
      res[y * 8 + x] = std::min(1.0, 100.0 * acc / 3.0);
    }
  double mean = 0.0;
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 8; ++x) {
      double acc = 0.0, total = 0.0;
      for (int ky = -3; ky <= 3; ++ky)
        for (int kx = -3; kx <= 3; ++kx) {
          const double w = std::exp(-(kx * kx + ky * ky) / 18.0);
          acc += w * res[std::clamp(y + ky, 0, 5) * 8 + std::clamp(x + kx, 0, 7)];
          total += w;
        }
      const double expected = 1.0 - acc / total;
      mean += expected;
      ASSERT_NEAR(m.mask_gt.at(y, x), expected, 1e-6);
    }
  EXPECT_EQ(m.gated, mean / 48.0 < 0.6);
}

TEST(MaskFromResidual, SpikeGivesOneMinusCenterWeight) {
  ScalarMap spike{21, 21, std::vector<double>(21 * 21, 0.0)};
  spike.data[10 * 21 + 10] = 5.0;  // clamps to 1
  const GrayMap m = mask_from_residual(spike, 7, 3.0);
  EXPECT_NEAR(m.at(10, 10), 1.0 - center_weight_7x7_sigma3(), 1e-6);
  EXPECT_EQ(m.at(0, 0), 1.0f);
}

TEST(MaskFromResidual, InversionCommutesWithBlur) {
  const GrayMap x = testing::random_map(13, 17, 5);
  ScalarMap as_residual{13, 17, {}};
  for (float v : x.data()) as_residual.data.push_back(v);
  const GrayMap inverted_after = mask_from_residual(as_residual, 7, 3.0);
  std::vector<float> flipped;
  for (float v : x.data()) flipped.push_back(1.0f - v);
  const GrayMap blurred_flip = gaussian_blur(GrayMap(13, 17, std::move(flipped)), 7, 3.0);
  for (std::size_t i = 0; i < x.sample_count(); ++i) {
    ASSERT_NEAR(inverted_after.data()[i], blurred_flip.data()[i], 1e-6);
  }
}

TEST(MakeMaskGt, NonIncreasingInK) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Frame clear = testing::textured_frame(32, 32, s);
    const Frame blur = testing::textured_frame(32, 32, s, 0.7, 0.3);
    GrayMap prev;
    for (double k : {10.0, 100.0, 1000.0}) {
      MaskParams p;
      p.k = k;
      const GrayMap m = make_mask_gt(clear, blur, p).mask_gt;
      if (!prev.empty()) {
        for (std::size_t i = 0; i < m.sample_count(); ++i) ASSERT_LE(m.data()[i], prev.data()[i]);
      }
      prev = m;
    }
  }
}

TEST(MakeMaskGt, ResolutionContractAndDivisibility) {
  const Frame a = testing::random_frame(40, 60, 1);
  EXPECT_EQ(make_mask_gt(a, a).mask_gt.height(), 10);
  EXPECT_EQ(make_mask_gt(a, a).mask_gt.width(), 15);
  const Frame odd(42, 60);
  EXPECT_EQ(error_code_of([&] { make_mask_gt(odd, odd); }), Errc::kInvalidArgument);
  EXPECT_EQ(error_code_of([&] { make_mask_gt(a, Frame(40, 64)); }), Errc::kDimensionMismatch);
}

TEST(MakeMaskGt, ParamsValidated) {
  const Frame a(8, 8);
  MaskParams p;
  p.k = 0.0;
  EXPECT_EQ(error_code_of([&] { make_mask_gt(a, a, p); }), Errc::kInvalidArgument);
  p = {};
  p.kernel_size = 6;
  EXPECT_EQ(error_code_of([&] { make_mask_gt(a, a, p); }), Errc::kInvalidArgument);
  p = {};
  p.gate_threshold = 1.0;
  EXPECT_EQ(error_code_of([&] { make_mask_gt(a, a, p); }), Errc::kInvalidArgument);
}

TEST(MaskLoss, HandExamples) {
  const GrayMap ones(4, 4, 1.0f);
  const GrayMap zeros(4, 4, 0.0f);
  const GrayMap quarter(4, 4, 0.25f);
  EXPECT_EQ(mask_loss(ones, zeros), 0.0);
  EXPECT_EQ(mask_loss(ones, quarter), 0.0);
  EXPECT_EQ(mask_loss(zeros, zeros), 0.0);
  EXPECT_DOUBLE_EQ(mask_loss(zeros, quarter), 0.25);
}

TEST(MaskLoss, GateAndNaiveOracle) {
  Rng rng(55);
  for (int i = 0; i < 50; ++i) {
    const double lo = rng.uniform(0.0, 0.7);
    const GrayMap gt = testing::random_map(9, 11, 1000 + i, lo, std::min(1.0, lo + 0.5));
    const GrayMap pred = testing::random_map(9, 11, 2000 + i);
    double mean = 0.0, l1 = 0.0;
    for (std::size_t s = 0; s < gt.sample_count(); ++s) {
      mean += gt.data()[s];
      l1 += std::fabs(static_cast<double>(gt.data()[s]) - pred.data()[s]);
    }
    mean /= gt.sample_count();
    l1 /= gt.sample_count();
    const double loss = mask_loss(gt, pred);
    if (mean >= 0.6) {
      EXPECT_EQ(loss, 0.0);
    } else {
      EXPECT_NEAR(loss, l1, 1e-9);
    }
  }
  EXPECT_EQ(error_code_of([] { mask_loss(GrayMap(2, 2), GrayMap(3, 2)); }), Errc::kDimensionMismatch);
}

}  // namespace
}  // namespace vsrsynth
