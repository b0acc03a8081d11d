#pragma once

// Counter-based random numbers. Philox4x32-10 (Salmon et al., SC'11) is
// specified bit-for-bit, so a (seed, stream) pair yields the same sequence on
// every platform. Normal deviates use the Box-Muller transform instead of
// std::normal_distribution, whose algorithm is implementation-defined.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace persist {

/// Philox4x32 with 10 rounds. One call maps a 128-bit counter and a 64-bit
/// key to 128 random bits.
class Philox4x32 {
public:
  using counter_type = std::array<std::uint32_t, 4>;
  using key_type = std::array<std::uint32_t, 2>;

  static constexpr counter_type block(counter_type ctr, key_type key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Random stream keyed by (seed, stream). Streams with distinct ids are
/// independent, which is how Monte-Carlo epochs get per-epoch generators
/// without depending on worker scheduling.
///
/// Satisfies UniformRandomBitGenerator.
class Rng {
public:
  using result_type = std::uint32_t;

  /// Bumped whenever the mapping from (seed, stream) to output changes.
  static constexpr int kVersion = 1;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    const std::uint64_t hi = (*this)() >> 5;  // 27 bits
    const std::uint64_t lo = (*this)() >> 6;  // 26 bits
    return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Standard normal deviate.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // 1 - u lies in (0, 1], so the logarithm is finite.
    const double radius = std::sqrt(-2.0 * std::log(1.0 - uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  double normal(double mean, double sigma) noexcept { return mean + sigma * normal(); }

private:
  void refill() noexcept {
    const Philox4x32::counter_type ctr{
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    buf_ = Philox4x32::block(ctr, key_);
    ++block_;
    pos_ = 0;
  }

  Philox4x32::key_type key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Philox4x32::counter_type buf_{};
  int pos_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace persist
