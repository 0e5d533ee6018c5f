#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace eft {

// Deterministic 64-bit generator (splitmix64). All sampling in this project
// goes through this wrapper instead of <random> distributions: the standard
// does not pin down uniform_int_distribution and friends, and the samplers
// promise bit-identical output for a given seed on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  // Index into a finite pmf given as cumulative weights (last entry ~ 1).
  std::size_t from_cdf(std::span<const double> cdf) {
    const double u = unit();
    for (std::size_t i = 0; i + 1 < cdf.size(); ++i) {
      if (u < cdf[i]) return i;
    }
    return cdf.empty() ? 0 : cdf.size() - 1;
  }

  // Z >= 0 with Z+1 ~ Geometric(p) on {1,2,...}, i.e. P[Z=k] = p(1-p)^k.
  std::uint64_t geometric_minus_one(double p) {
    const double u = unit();
    if (p >= 1.0) return 0;
    const double k = std::floor(std::log1p(-u) / std::log1p(-p));
    return k < 0 ? 0 : static_cast<std::uint64_t>(k);
  }

  // In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  // Independent stream for replicate `index` of a run seeded with `seed`.
  // Used for replicate-level parallelism: the result of replicate i does not
  // depend on how replicates are distributed over workers.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    Rng mix(seed ^ (0xA0761D6478BD642FULL * (index + 1)));
    mix.next_u64();
    return Rng(mix.next_u64());
  }

 private:
  std::uint64_t state_;
};

}  // namespace eft
