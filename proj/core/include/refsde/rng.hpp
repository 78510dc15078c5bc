#pragma once

#include <array>
#include <cstdint>

namespace refsde {

/// Counter-based random stream (Philox4x32-10).
///
/// Draw k of stream s under seed σ is a pure function of (σ, s, k), so
/// replicate r of an experiment can be generated on any worker, in any
/// order, and still produce identical output. Uniform and normal variates
/// are derived from the raw 64-bit output deterministically (no
/// implementation-defined std::*_distribution involved), which keeps
/// simulated paths bitwise reproducible.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  /// Raw 64-bit draw.
  std::uint64_t next_u64();

  /// Uniform variate strictly inside (0, 1).
  double uniform();

  /// Standard normal variate (Box-Muller; the spare is cached).
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int lane_ = 4;  // 32-bit lanes consumed from block_
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace refsde
