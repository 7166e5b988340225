#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace mmwcache {

// SplitMix64 finalizer; used to decorrelate nearby seed values.
inline uint64_t mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Independent stream seed for (base, stream). Two trials never share a stream.
inline uint64_t derive_seed(uint64_t base, uint64_t stream) {
  return mix64(base ^ (0xD1342543DE82EF95ull * (stream + 1)));
}

// Deterministic RNG with hand-rolled distributions so that results are
// reproducible bit-for-bit for a given seed, independent of the standard
// library's distribution implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // unit-mean exponential
  double exponential() { return -std::log1p(-uniform()); }

  bool bernoulli(double p) { return uniform() < p; }

  // Exact Poisson sampling; large means are split into chunks so the
  // multiplicative method never underflows.
  long poisson(double mean) {
    long total = 0;
    while (mean > 30.0) {
      total += poisson_small(30.0);
      mean -= 30.0;
    }
    return total + poisson_small(mean);
  }

  // Index draw from a cumulative distribution (cdf is nondecreasing, ends at ~1).
  int sample_cdf(std::span<const double> cdf) {
    const double u = uniform();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    return static_cast<int>(it - cdf.begin());
  }

 private:
  long poisson_small(double mean) {
    const double limit = std::exp(-mean);
    long k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  std::mt19937_64 eng_;
};

}  // namespace mmwcache
