#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace ccpnet {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic generator. `derived(seed, stream)` gives independent streams
// indexed by shard, so parallel sampling produces the same draws regardless
// of thread count.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  static Rng derived(uint64_t seed, uint64_t stream) {
    return Rng(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x51ed2701ULL)));
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  // Fresh distribution per call: no cached second variate, so the stream
  // position depends only on the call count.
  double gauss() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  std::complex<double> cgauss() {
    const double re = gauss();
    const double im = gauss();
    return {re, im};
  }
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(eng_);
  }
  uint64_t next_u64() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace ccpnet
