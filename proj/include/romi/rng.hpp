#pragma once

#include <cstdint>

namespace romi {

// SplitMix64 (Steele et al. 2014). Used to derive stream seeds; one 64-bit
// state, passes BigCrush, and distinct gamma-free counters give independent
// outputs, which is what makes the per-replication streams reproducible
// regardless of scheduling.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}
  uint64_t next();

 private:
  uint64_t state_;
};

// xoshiro256++ seeded via SplitMix64. All variate generators are implemented
// here rather than in <random> so that results are bit-identical across
// compilers and standard libraries.
class RngStream {
 public:
  RngStream() : RngStream(0x9e3779b97f4a7c15ull) {}
  explicit RngStream(uint64_t seed);

  // Counter-based stream derivation: (master, key1, key2) -> independent
  // stream. Same tuple always yields the same stream.
  static RngStream derive(uint64_t master, uint64_t key1, uint64_t key2 = 0);

  uint64_t next_u64();
  // uniform on [0,1) with 53 random bits
  double uniform();
  // standard normal (polar Marsaglia; second deviate cached)
  double normal();
  // Marsaglia-Tsang for shape >= 1, boosted for shape < 1; unit scale
  double gamma(double shape);
  double beta(double a, double b);
  bool bernoulli(double p) { return uniform() < p; }
  // uniform integer on [0, n)
  uint64_t below(uint64_t n);

 private:
  uint64_t s_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace romi
