#pragma once

#include <cstdint>
#include <vector>

namespace morphkit {

// Seedable, platform-stable generator used everywhere randomness is needed.
// Algorithm: splitmix64 (Steele, Lea, Flood 2014). The sequence depends only
// on the 64-bit seed and is identical on every platform, which is what makes
// split/report reproducibility guarantees possible. Bounded draws use the
// plain modulo reduction; shuffles are Fisher-Yates.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound).
  uint64_t below(uint64_t bound) { return bound ? next() % bound : 0; }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
};

// Stable derivation of per-task seeds from a master seed.
inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
  SplitMix64 g(master ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
  return g.next();
}

}  // namespace morphkit
