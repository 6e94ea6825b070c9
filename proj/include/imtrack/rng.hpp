#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "imtrack/moments.hpp"

namespace imtrack {

//! Deterministic random stream with derived per-run substreams. The normal
//! and Poisson draws are generated explicitly (Box-Muller, Knuth) so that
//! sequences are reproducible independent of the standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Substream for one Monte Carlo run: the run index is mixed into the base
  // seed through a splitmix64 step.
  static Rng substream(std::uint64_t base_seed, std::uint64_t index) {
    return Rng(splitmix64(base_seed + 0x9E3779B97F4A7C15ull * (index + 1)));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform draw in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the second draw of each pair is cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(2.0 * kPi * u2);
    has_cached_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Knuth Poisson sampler, chunked so large means stay in floating range.
  int poisson(double mean) {
    int count = 0;
    while (mean > 400.0) {
      count += poisson_chunk(400.0);
      mean -= 400.0;
    }
    return count + poisson_chunk(mean);
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  int poisson_chunk(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace imtrack
