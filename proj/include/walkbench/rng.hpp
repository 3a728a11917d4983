#pragma once

#include <cstdint>
#include <random>

namespace walkbench {

// SplitMix64 mixer; used to derive independent stream seeds from (seed, index)
// pairs so trials can be evaluated in any order and still reproduce bit-for-bit.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

// Deterministic uniform generator. mt19937_64 output is pinned by the C++
// standard; the double mapping below is ours, so sequences are identical on
// every platform (std::uniform_real_distribution makes no such promise).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace walkbench
