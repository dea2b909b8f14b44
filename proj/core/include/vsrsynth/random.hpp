#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace vsrsynth {

using Seed = std::uint64_t;

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based stream derivation: folds `parts` into `seed` with mix64, so
/// a stream depends only on (seed, parts) and never on evaluation order.
Seed derive_seed(Seed seed, std::initializer_list<std::uint64_t> parts) noexcept;

/// Well-known stream tags so unrelated consumers of one seed never collide.
enum class Stream : std::uint64_t {
  kBlurParams = 0x626c7572,
  kBernoulli = 0x6265726e,
  kSecondPass = 0x70617332,
  kDegrade = 0x64656772,
  kNoise = 0x6e6f6973,
  kSplit = 0x73706c74,
  kClipSelect = 0x636c6970,
  kClipCount = 0x636e7420,
};

inline std::uint64_t tag(Stream s) { return static_cast<std::uint64_t>(s); }

/// Deterministic generator. Conversions to real numbers are done here rather
/// than with <random> distributions, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n), unbiased (rejection sampling). n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Uniform integer in [lo, hi].
  int between(int lo, int hi);
  bool bernoulli(double p) { return uniform() < p; }
  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace vsrsynth
