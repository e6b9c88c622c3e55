#pragma once
// Deterministic random streams for Monte-Carlo estimation.
//
// All draws go through xoshiro256++ seeded via splitmix64, with the uniform
// and Gaussian transforms written out explicitly.  Nothing here depends on
// std::<distribution> internals, so a (seed, stream) pair produces the same
// byte-identical sample path on every platform and toolchain.

#include <array>
#include <cmath>
#include <cstdint>

namespace cogmac {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t sm = seed ^ (0xa0761d6478bd642full * (stream + 1));
    for (auto& w : s_) w = splitmix64(sm);
    if (s_[0] == 0 && s_[1] == 0 && s_[2] == 0 && s_[3] == 0) s_[0] = 1;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform on [0,1), 53-bit resolution
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // uniform on (0,1], safe as a log() argument
  double uniform01_pos() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

  // circularly-symmetric complex Gaussian with E|X|^2 = variance,
  // returned as {re, im}; |X|^2 is exactly exponential with mean `variance`.
  std::array<double, 2> complex_gaussian(double variance) {
    const double r = std::sqrt(-variance * std::log(uniform01_pos()));
    const double th = 6.283185307179586476925287 * uniform01();
    return {r * std::cos(th), r * std::sin(th)};
  }

  // index into a 4-way categorical given cumulative weights (cum[3] >= 1)
  int categorical4(const std::array<double, 4>& cum) {
    const double u = uniform01();
    if (u < cum[0]) return 0;
    if (u < cum[1]) return 1;
    if (u < cum[2]) return 2;
    return 3;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> s_;
};

}  // namespace cogmac
