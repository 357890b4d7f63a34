// Self-contained deterministic random number generation. Standard library
// distributions are implementation-defined, so every draw used by the
// simulator goes through this engine to keep runs byte-reproducible.
#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace sbw {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Deterministic substream seed for a named stage under one root seed.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view name) {
  std::uint64_t sm = root ^ fnv1a64(name);
  return splitmix64(sm);
}

// xoshiro256** seeded through splitmix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // uniform in [0,1)
  double next_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [0,bound); bound > 0. Rejection-free modulo; the bias is
  // below 2^-32 for every bound used here.
  std::uint64_t below(std::uint64_t bound) { return next_u64() % bound; }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

  bool bernoulli(double p) { return next_real() < p; }

  // mean 1/p trials, support {1,2,...}
  std::uint64_t geometric(double p) {
    if (p >= 1.0) return 1;
    double u = next_real();
    while (u <= 0.0) u = next_real();
    return 1 + static_cast<std::uint64_t>(std::log(u) / std::log1p(-p));
  }

  // inversion by sequential search; fine for the small means used here
  std::uint64_t poisson(double mean) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double prod = next_real();
    while (prod > limit) {
      ++k;
      prod *= next_real();
    }
    return k;
  }

  double normal(double mean, double stddev) {
    double u1 = next_real();
    while (u1 <= 0.0) u1 = next_real();
    const double u2 = next_real();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * mag * std::cos(6.283185307179586476925 * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = index(i);
      using std::swap;
      swap(v[i - 1], v[j]);
    }
  }

  // Independent stream derived from the construction seed and a name; does
  // not depend on how much state has been consumed. Stage streams
  // (generator, probe, ...) come from the root seed this way so stages can
  // re-run in isolation.
  Rng substream(std::string_view name) const { return Rng(derive_seed(seed_, name)); }

  std::uint64_t seed() const { return seed_; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t seed_;
  std::uint64_t state_[4];
};

}  // namespace sbw
