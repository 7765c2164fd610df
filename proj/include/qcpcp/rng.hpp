#pragma once

#include <cstdint>
#include <random>

namespace qcpcp {

/// Seeded bit source. Only raw mt19937_64 output is consumed (no std
/// distributions), so a seed reproduces the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform word with the low `n` bits random (n <= 64).
  std::uint64_t bits(unsigned n) {
    if (n == 0) return 0;
    std::uint64_t w = engine_();
    return n >= 64 ? w : w & ((std::uint64_t{1} << n) - 1);
  }

  /// Uniform integer in [0, bound), by rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t w;
    do {
      w = engine_();
    } while (w >= limit);
    return w % bound;
  }

  bool coin() { return engine_() >> 63; }

  /// True with probability num / den.
  bool bernoulli(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qcpcp
