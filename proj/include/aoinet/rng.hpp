#pragma once

#include <cstdint>
#include <random>

namespace aoinet {

// mt19937_64 with an explicit bit-to-double mapping so that streams are
// reproducible across standard libraries (distributions are not portable).
class Rng {
 public:
  explicit Rng(uint64_t seed) : _eng(seed) {}

  uint64_t bits() { return _eng(); }

  // uniform in [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(_eng() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n)
  uint64_t integer(uint64_t n) {
    uint64_t v = static_cast<uint64_t>(uniform() * static_cast<double>(n));
    return v >= n ? n - 1 : v;
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 _eng;
};

}  // namespace aoinet
