#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace llk {

/// xoshiro256++ seeded through splitmix64. Every sampler in the library draws
/// from this generator with a fixed consumption pattern so that sequences are
/// reproducible from the seed alone.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits: (next() >> 11) * 2^-53.
  double uniform();
  /// Uniform on (0, 1): ((next() >> 11) + 0.5) * 2^-53.
  double uniform_open();

 private:
  std::array<std::uint64_t, 4> s_;
};

/// One splitmix64 step; exposed for seeding derived streams.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace llk
