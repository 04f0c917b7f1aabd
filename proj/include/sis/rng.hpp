#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace sis {

/// SplitMix64 output finalizer (Steele, Lea, Flood 2014).
std::uint64_t mix64(std::uint64_t z);

/// Seed of replication r: base ^ mix64(r + 0x9E3779B97F4A7C15).
std::uint64_t replication_seed(std::uint64_t base, std::uint64_t replication);

/// Seed of an independent stream within one replication:
/// mix64(rep_seed ^ mix64(stream ^ 0xD1B54A32D192ED03)).
std::uint64_t stream_seed(std::uint64_t rep_seed, std::uint64_t stream);

/// xoshiro256** 1.0 (Blackman, Vigna), state filled by SplitMix64 from the
/// seed. Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> s_;
};

/// Variate generators with fully specified algorithms, so streams are
/// reproducible across standard libraries (std:: distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  /// Uniform on the open interval (0, 1).
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }
  /// Standard normal by the Marsaglia polar method.
  double normal();
  /// Laplace with location 0 and scale 1 (variance 2), by inversion.
  double laplace();
  bool bernoulli(double prob) { return uniform() < prob; }
  /// Poisson: sequential inversion below mean 30, Hoermann's PTRS above.
  std::uint64_t poisson(double mean);

  Xoshiro256& engine() { return engine_; }

 private:
  Xoshiro256 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sis
