#pragma once

#include <cstdint>

namespace qbinom::qfilter {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based stream: draw n of stream (seed, path) is mix64(key + (n + 1) * golden),
// with key derived from both. Streams for different paths are independent of evaluation order.
class PathRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  PathRng(std::uint64_t seed, std::uint64_t path) : key_(mix64(seed ^ mix64(path + kGolden))) {}

  std::uint64_t next() {
    counter_ += kGolden;
    return mix64(key_ + counter_);
  }

  // Uniform on [0, 1) with 53 random mantissa bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qbinom::qfilter
