#pragma once

#include <bit>
#include <cmath>
#include <cstdint>

namespace loclim {

// Splittable counter-based generator in the splitmix64 family.  Every replica
// gets its own stream derived from (master_seed, stream_index), so results do
// not depend on how replicas are scheduled across threads, and a stream can be
// skipped forward in O(1).

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t mix64_v13(std::uint64_t z) noexcept {
  z = (z ^ (z >> 31)) * 0x7fb5d329728ea185ULL;
  z = (z ^ (z >> 27)) * 0x81dadef4bc2dd44dULL;
  return z ^ (z >> 33);
}

class RngStream {
 public:
  RngStream() : RngStream(0) {}

  explicit RngStream(std::uint64_t seed)
      : state_(mix64(seed + kGoldenGamma)), gamma_(mix_gamma(seed + 2 * kGoldenGamma)) {}

  // Stream for one replica of one experiment.  Pure function of its inputs.
  static RngStream derived(std::uint64_t master_seed, std::uint64_t stream_index) noexcept {
    const std::uint64_t key = mix64(master_seed + kGoldenGamma);
    return RngStream(mix64(key ^ (stream_index + kGoldenGamma)));
  }

  std::uint64_t next_u64() noexcept {
    state_ += gamma_;
    return mix64(state_);
  }

  // 53-bit uniform in [0, 1).
  double next_unit() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Inverse-CDF exponential with the given mean; argument of log1p stays in (-1, 0].
  double next_exponential(double mean) noexcept { return -mean * std::log1p(-next_unit()); }

  void discard(std::uint64_t count) noexcept { state_ += count * gamma_; }

 private:
  static constexpr std::uint64_t mix_gamma(std::uint64_t z) noexcept {
    z = mix64_v13(z) | 1ULL;
    if (std::popcount(z ^ (z >> 1)) < 24) z ^= 0xaaaaaaaaaaaaaaaaULL;
    return z;
  }

  std::uint64_t state_;
  std::uint64_t gamma_;
};

}  // namespace loclim
