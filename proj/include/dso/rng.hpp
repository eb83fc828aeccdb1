// Deterministic, platform-independent random bits. Everything that flips a
// coin in this project goes through one of these so replays are exact.
#pragma once

#include <cstdint>

namespace dso {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stateless hash of a small tuple, used for local coin flips that must be
// recomputable anywhere (e.g. sampled-subgraph membership).
inline std::uint64_t hash_tuple(std::uint64_t a, std::uint64_t b = 0,
                                std::uint64_t c = 0, std::uint64_t d = 0) {
  std::uint64_t h = mix64(a);
  h = mix64(h ^ b);
  h = mix64(h ^ c);
  h = mix64(h ^ d);
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n); n = 0 yields 0.
  std::uint64_t bounded(std::uint64_t n) {
    if (n == 0) return 0;
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  // Uniform in [0, 1).
  double real01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool coin(double p) { return real01() < p; }

  // Independent child stream; replayable regardless of how much the parent
  // has been consumed afterwards.
  Rng fork(std::uint64_t tag) const { return Rng(hash_tuple(state_, tag)); }

 private:
  std::uint64_t state_;
};

}  // namespace dso
