#pragma once

#include <cmath>
#include <cstdint>

namespace fmpos {

// SplitMix64: tiny, portable, and splittable. Every randomized ensemble in
// the toolkit derives one independent substream per trial from (seed, index),
// so results do not depend on evaluation order and reports are reproducible
// bit-for-bit across runs with the same seed.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  static Rng substream(uint64_t seed, uint64_t stream) {
    // Decorrelate the stream index before mixing it into the seed.
    Rng r(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
    r.next_u64();
    r.next_u64();
    return r;
  }

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1) with 53 bits of mantissa.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Inclusive bounds.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
  }

  // Marsaglia polar method; deterministic given the stream position.
  double normal() {
    for (;;) {
      double u = 2.0 * uniform01() - 1.0;
      double v = 2.0 * uniform01() - 1.0;
      double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

 private:
  uint64_t state_;
};

}  // namespace fmpos
