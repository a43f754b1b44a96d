#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace mrta {

// Seeded stream built on mt19937_64, whose output sequence is fixed by the
// standard. The std distributions are implementation-defined, so the
// conversions below are done by hand to keep results identical across
// standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform index in [0, n); unbiased (rejection on the top partial block).
  std::size_t index(std::size_t n) {
    if (n <= 1) return 0;
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<std::size_t>(x % bound);
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace mrta
