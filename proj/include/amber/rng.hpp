#ifndef AMBER_RNG_HPP_
#define AMBER_RNG_HPP_

#include <cassert>
#include <cmath>
#include <cstdint>
#include <random>

namespace amber {

// Deterministic random source used everywhere in the engine. The engine is
// std::mt19937_64, whose output sequence is fixed by the standard; the
// distribution transforms live here because the std:: distributions are
// implementation-defined and would break reproducibility across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; consumes two engine draws per sample.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  // Uniform integer in [0, n) without modulo bias.
  size_t uniform_index(size_t n) {
    assert(n > 0);
    const uint64_t threshold = (0 - static_cast<uint64_t>(n)) % n;  // 2^64 mod n
    for (;;) {
      const uint64_t r = engine_();
      if (r >= threshold) return static_cast<size_t>(r % n);
    }
  }

 private:
  static constexpr double kTwoPi = 6.283185307179586476925286766559;
  std::mt19937_64 engine_;
};

}  // namespace amber

#endif  // AMBER_RNG_HPP_
