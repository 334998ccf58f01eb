#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace lorenzlab {

// mt19937_64 with a fixed conversion to [0,1), so sample streams are the
// same on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// n points uniform in (lo, hi), endpoints excluded.
inline std::vector<double> uniform_samples(std::uint64_t seed, std::size_t n, double lo = 0.0, double hi = 1.0) {
  Rng rng(seed);
  std::vector<double> out;
  out.reserve(n);
  while (out.size() < n) {
    const double x = rng.uniform(lo, hi);
    if (x > lo && x < hi) out.push_back(x);
  }
  return out;
}

}  // namespace lorenzlab
