#pragma once

// Counter-based random numbers. Draw i of stream `seed` is a pure function of
// (seed, i), so any slice of a stream can be generated independently and the
// output never depends on the standard library's distribution code.
//
//   uniform(seed, i)  = (splitmix64(seed ^ splitmix64(i)) >> 11) * 2^-53, in [0, 1)
//   normal(seed, 2j), normal(seed, 2j+1) = Box-Muller pair from uniforms
//                                         (2j, 2j+1), radius from 1 - u.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace gridsmooth {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for replicate `replicate` of an experiment at grid size n.
constexpr std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t n, std::uint64_t replicate) {
  return splitmix64(splitmix64(splitmix64(base_seed) ^ n) ^ replicate);
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t bits(std::uint64_t counter) const { return splitmix64(seed_ ^ splitmix64(counter)); }

  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  double normal(std::uint64_t counter) const {
    const std::uint64_t pair = counter & ~std::uint64_t{1};
    const double u1 = 1.0 - uniform(pair);  // (0, 1]
    const double u2 = uniform(pair + 1);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return (counter & 1) ? radius * std::sin(angle) : radius * std::cos(angle);
  }

 private:
  std::uint64_t seed_;
};

}  // namespace gridsmooth
