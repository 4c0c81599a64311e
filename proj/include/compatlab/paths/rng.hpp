#pragma once

// Counter-based random streams. A stream is identified by (seed, index,
// purpose); its i-th block is Philox4x32-10 applied to the counter
// {i_lo, i_hi, index, purpose} under the key {seed_lo, seed_hi}, so any
// stream can be regenerated independently of every other stream.

#include <array>
#include <cstdint>

namespace compatlab::paths {

using Block = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

Block philox4x32_10(Block counter, Key key);

namespace purpose {
inline constexpr std::uint32_t brownian = 1;
inline constexpr std::uint32_t bridge = 2;
inline constexpr std::uint32_t jumps = 3;
inline constexpr std::uint32_t initial = 4;
inline constexpr std::uint32_t bootstrap = 5;
inline constexpr std::uint32_t coin = 6;
/// Independent auxiliary streams: aux(0), aux(1), ...
constexpr std::uint32_t aux(std::uint32_t k) { return 0x100u + k; }
/// Per-clock Brownian motions of a time-change model.
constexpr std::uint32_t clock(std::uint32_t k) { return 0x200u + k; }
}  // namespace purpose

class Stream {
 public:
  Stream(std::uint64_t seed, std::uint32_t index, std::uint32_t purpose_tag)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        index_(index),
        purpose_(purpose_tag) {}

  std::uint32_t next_u32() {
    if (used_ == 4) refill();
    return buffer_[used_++];
  }
  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }
  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }
  /// Standard normal by inverse CDF.
  double normal();

 private:
  void refill() {
    buffer_ = philox4x32_10({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32), index_,
                             purpose_},
                            key_);
    ++block_;
    used_ = 0;
  }

  Key key_;
  std::uint32_t index_;
  std::uint32_t purpose_;
  std::uint64_t block_ = 0;
  Block buffer_{};
  int used_ = 4;
};

/// Inverse of the standard normal CDF on (0, 1).
double normal_quantile(double u);

}  // namespace compatlab::paths
