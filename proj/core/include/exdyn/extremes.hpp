#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "exdyn/dynamics.hpp"
#include "exdyn/observables.hpp"

namespace exdyn {

struct BlockMaxima {
  std::vector<double> maxima;
  std::size_t block_length = 0;
  std::size_t n_blocks = 0;
};

// Maxima over consecutive, non-overlapping blocks; trailing data beyond
// block_length * n_blocks is ignored. Throws ConfigError if too short.
BlockMaxima block_maxima(std::span<const double> values, std::size_t block_length, std::size_t n_blocks);
inline BlockMaxima block_maxima(const ScalarSeries& s, std::size_t block_length, std::size_t n_blocks) {
  return block_maxima(s.values, block_length, n_blocks);
}

// Folds a blocklen-k sequence into blocklen (k * factor) by taking maxima
// over `factor` consecutive entries; uses the first n_blocks * factor.
BlockMaxima coarsen(const BlockMaxima& fine, std::size_t factor, std::size_t n_blocks);

// Streaming block-maximum extraction.
class BlockMaximaAccumulator {
 public:
  BlockMaximaAccumulator(std::size_t block_length, std::size_t n_blocks);

  void push(double v) noexcept {
    if (v > current_) current_ = v;
    if (++filled_ == block_length_) {
      out_.maxima.push_back(current_);
      current_ = -std::numeric_limits<double>::infinity();
      filled_ = 0;
    }
  }

  bool done() const noexcept { return out_.maxima.size() >= out_.n_blocks; }
  BlockMaxima release();

 private:
  std::size_t block_length_;
  std::size_t filled_ = 0;
  double current_ = -std::numeric_limits<double>::infinity();
  BlockMaxima out_;
};

// N_samp contiguous sub-samples of equal size, order preserved.
std::vector<std::vector<double>> partition(const BlockMaxima& maxima, std::size_t n_samp);

// Steps used by generic_point when none are given: 1e5 iterates for maps,
// 1e3 time units for flows.
std::size_t generic_point_steps(const SystemSpec& system, std::optional<double> sample_interval = std::nullopt);

// Final point of a transient-length orbit from a seeded random start,
// treated as SRB-generic. Cartesian for the solenoid.
StateVector generic_point(const SystemSpec& system, std::uint64_t seed);

// (1 + t) p.
StateVector radial_perturb(const StateVector& p, double t);

}  // namespace exdyn
