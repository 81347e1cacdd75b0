// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace irssec::chansim {

/// SplitMix64 step; used to seed and to derive independent streams.
std::uint64_t splitmix64(std::uint64_t& state);

/// xoshiro256** with a Box-Muller normal sampler. Every draw is defined by
/// integer arithmetic plus libm log/sqrt/cos/sin, so sequences are portable
/// across platforms that provide correctly rounded (or identical) libm.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent generator for (seed, stream, substream), e.g. (scenario
  /// seed, link id, resampling attempt). Draw order on one stream never
  /// affects another.
  static Rng stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0);

  std::uint64_t next_u64();
  /// Uniform on (0, 1].
  double uniform();
  double normal();
  /// Circularly-symmetric CN(0, 1): real and imaginary parts each N(0, 1/2).
  std::complex<double> complex_normal();

 private:
  std::array<std::uint64_t, 4> s_;
};

}  // namespace irssec::chansim
