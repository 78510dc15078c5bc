#include "refsde/rng.hpp"

#include <cmath>

namespace refsde {

namespace {

constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMult0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMult1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {}

void RngStream::refill() {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(block_index_),
      static_cast<std::uint32_t>(block_index_ >> 32),
      static_cast<std::uint32_t>(stream_),
      static_cast<std::uint32_t>(stream_ >> 32)};
  const std::array<std::uint32_t, 2> key = {
      static_cast<std::uint32_t>(seed_),
      static_cast<std::uint32_t>(seed_ >> 32)};
  block_ = philox4x32_10(ctr, key);
  ++block_index_;
  lane_ = 0;
}

std::uint64_t RngStream::next_u64() {
  if (lane_ >= 3) refill();  // need two fresh lanes
  const std::uint64_t lo = block_[lane_];
  const std::uint64_t hi = block_[lane_ + 1];
  lane_ += 2;
  return (hi << 32) | lo;
}

double RngStream::uniform() {
  // (x >> 11) has 53 random bits; the half-step offset keeps the value
  // strictly inside (0, 1) so log() in Box-Muller is always finite.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * 3.14159265358979323846 * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

}  // namespace refsde
