#pragma once

#include <array>
#include <cstdint>

namespace dsd {

/// Philox4x32-10 counter-based generator. Each (key, counter) pair maps to four independent
/// 32-bit words, so any draw can be addressed directly without stepping a state.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      const std::uint64_t p0 = std::uint64_t(kM0) * ctr[0];
      const std::uint64_t p1 = std::uint64_t(kM1) * ctr[2];
      const auto hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
      const auto hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;
};

/// Sequential uniform stream over one Philox substream. The key is the 64-bit seed; the upper
/// two counter words select the substream (e.g. cell and replication), the lower two count
/// blocks.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint32_t stream_hi, std::uint32_t stream_lo)
      : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)}, hi_(stream_hi), lo_(stream_lo) {}

  std::uint32_t next_u32() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    const std::uint64_t a = next_u32() >> 5;  // 27 bits
    const std::uint64_t b = next_u32() >> 6;  // 26 bits
    return double((a << 26) | b) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Uniform integer in [0, n), n >= 1, by rejection.
  std::uint32_t below(std::uint32_t n) {
    const std::uint32_t limit = std::uint32_t(-n) % n;  // 2^32 mod n
    for (;;) {
      const std::uint32_t v = next_u32();
      const std::uint64_t prod = std::uint64_t(v) * n;
      if (std::uint32_t(prod) >= limit) return std::uint32_t(prod >> 32);
    }
  }

 private:
  void refill() {
    buf_ = Philox4x32::block({std::uint32_t(block_), std::uint32_t(block_ >> 32), lo_, hi_}, key_);
    ++block_;
    pos_ = 0;
  }

  Philox4x32::Key key_;
  std::uint32_t hi_;
  std::uint32_t lo_;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buf_{};
  int pos_ = 4;
};

}  // namespace dsd
