#pragma once

#include <cstdint>
#include <random>

namespace lbcac {

// Seeded RNG with hand-rolled value mappings. std::mt19937_64 produces a
// bit-identical stream on every conforming implementation, but the standard
// <random> distributions do not, so the mappings below avoid them. This is
// what makes simulation runs and sweeps byte-reproducible across platforms.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Inclusive range. Modulo bias is irrelevant for simulation workloads.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lbcac
