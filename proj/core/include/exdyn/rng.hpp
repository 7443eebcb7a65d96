#pragma once

#include <cstdint>
#include <random>

namespace exdyn {

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Seed for sub-stream `stream` of `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

// Deterministic generator. std::mt19937_64's output sequence is fixed by the
// standard; the conversion to reals below is ours so results do not depend on
// the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1).
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(engine_() >> 11) * 0x1.0p-53);
  }

  // Uniform on {0, ..., n - 1}.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace exdyn
