#pragma once

#include <cstdint>

#include "prodrank/errors.hpp"

namespace prodrank {

// splitmix64. The exact sequence is part of the output contract of the
// corpus generator, so a port to another language must reproduce it bit for
// bit:
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// All arithmetic is unsigned 64-bit, wrapping on overflow.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, n) by rejection: draws are discarded while they
  // fall below (2^64 - n) mod n, then reduced modulo n. No modulo bias.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) fail(ErrorKind::Domain, "below(0) is undefined");
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform double in [0, 1) with 53 random bits: (next() >> 11) * 2^-53.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Failures before the first success of a Bernoulli(p) sequence.
  long long geometric_failures(double p) {
    if (!(p > 0.0) || p > 1.0) {
      fail(ErrorKind::Domain, "geometric probability must lie in (0,1]");
    }
    long long count = 0;
    while (next_double() >= p) ++count;
    return count;
  }

  // Sum of `dispersion` geometric failure counts with p = d/(d+mean):
  // mean as requested, variance mean*(1+mean/dispersion). Used for the
  // heavy-tailed counts; smaller dispersion means a heavier tail.
  long long negative_binomial(double mean, int dispersion) {
    if (mean < 0.0) fail(ErrorKind::Domain, "mean must be non-negative");
    if (dispersion < 1) fail(ErrorKind::Domain, "dispersion must be at least 1");
    if (mean == 0.0) return 0;
    const double p = static_cast<double>(dispersion) /
                     (static_cast<double>(dispersion) + mean);
    long long total = 0;
    for (int k = 0; k < dispersion; ++k) total += geometric_failures(p);
    return total;
  }

  // Successes in n Bernoulli(p) trials, one next_double() per trial.
  int binomial(int n, double p) {
    if (n < 0 || p < 0.0 || p > 1.0) {
      fail(ErrorKind::Domain, "binomial needs n >= 0 and p in [0,1]");
    }
    int count = 0;
    for (int k = 0; k < n; ++k) {
      if (next_double() < p) ++count;
    }
    return count;
  }

 private:
  std::uint64_t state_;
};

}  // namespace prodrank
