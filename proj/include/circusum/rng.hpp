#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace circusum {

namespace detail {
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }
}  // namespace detail

/// A reproducible random stream identified by (seed, stream_id). The engine
/// is xoshiro256** keyed through splitmix64, so distinct stream ids under one
/// seed give unrelated sequences and construction is cheap enough to do once
/// per Monte-Carlo replicate. Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept : seed_(seed), stream_id_(stream_id) {
    std::uint64_t key = detail::splitmix64(detail::splitmix64(seed) ^ stream_id);
    for (auto& word : state_) {
      key += 0x9E3779B97F4A7C15ULL;
      word = detail::splitmix64(key);
    }
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Child stream for replicate `index`, independent of this one.
  RngStream substream(std::uint64_t index) const noexcept {
    return RngStream(seed_, detail::splitmix64(stream_id_ ^ 0xA0761D6478BD642FULL) + index);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = detail::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1).
  double uniform_open() noexcept { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }
  double normal() { return normal_(*this); }
  double exponential() noexcept { return -std::log(uniform_open()); }
  double gamma(double shape) { return gamma_(*this, std::gamma_distribution<double>::param_type(shape, 1.0)); }
  double chi_squared(double df) { return 2.0 * gamma(0.5 * df); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_[4];
  std::normal_distribution<double> normal_;
  std::gamma_distribution<double> gamma_;
};

}  // namespace circusum
