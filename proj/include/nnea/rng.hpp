#pragma once

#include <cstdint>

namespace nnea {

// splitmix64 step; also used to spread seed material
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ with hand-rolled samplers. std:: engines would do, but std::
// distributions are implementation-defined and results here must be
// byte-reproducible across platforms and library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    do {
      for (auto& w : s_) w = splitmix64_next(sm);
    } while ((s_[0] | s_[1] | s_[2] | s_[3]) == 0);
  }

  // decorrelated per-trial seed derived from (master seed, trial index)
  static std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t sm = master ^ (0xd1342543de82ef95ULL * (index + 1));
    std::uint64_t a = splitmix64_next(sm);
    return a ^ splitmix64_next(sm);
  }

  static Rng for_stream(std::uint64_t master, std::uint64_t index) {
    return Rng(stream_seed(master, index));
  }

  std::uint64_t next() {
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

  // uniform on [0,1): 53-bit mantissa
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform on (0,1]: safe as a log() argument
  double uniform01_oc() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

}  // namespace nnea
