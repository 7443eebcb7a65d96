#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "exdyn/rng.hpp"

namespace testing {

// Small hand-rolled generator for property tests; every case derives from a
// fixed seed so failures reproduce.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double real(double lo, double hi) { return rng_.uniform(lo, hi); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_.below(n)); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }

  std::vector<double> reals(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = real(lo, hi);
    return v;
  }

 private:
  exdyn::Rng rng_;
};

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(1e-300, std::abs(want)); }

}  // namespace testing
