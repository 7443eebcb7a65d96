#include "exdyn/extremes.hpp"

#include <algorithm>
#include <cmath>

#include "exdyn/error.hpp"

namespace exdyn {

BlockMaxima block_maxima(std::span<const double> values, std::size_t block_length, std::size_t n_blocks) {
  if (block_length == 0 || n_blocks == 0) throw ConfigError("block_maxima: block length and count must be positive");
  if (values.size() / block_length < n_blocks) {
    throw ConfigError("block_maxima: series of length " + std::to_string(values.size()) + " is shorter than " +
                      std::to_string(block_length) + " x " + std::to_string(n_blocks));
  }
  BlockMaxima out;
  out.block_length = block_length;
  out.n_blocks = n_blocks;
  out.maxima.reserve(n_blocks);
  for (std::size_t k = 0; k < n_blocks; ++k) {
    const auto first = values.begin() + static_cast<std::ptrdiff_t>(k * block_length);
    out.maxima.push_back(*std::max_element(first, first + static_cast<std::ptrdiff_t>(block_length)));
  }
  return out;
}

BlockMaxima coarsen(const BlockMaxima& fine, std::size_t factor, std::size_t n_blocks) {
  if (factor == 0) throw ConfigError("coarsen: factor must be positive");
  BlockMaxima out = block_maxima(fine.maxima, factor, n_blocks);
  out.block_length = fine.block_length * factor;
  return out;
}

BlockMaximaAccumulator::BlockMaximaAccumulator(std::size_t block_length, std::size_t n_blocks)
    : block_length_(block_length) {
  if (block_length == 0 || n_blocks == 0) throw ConfigError("block_maxima: block length and count must be positive");
  out_.block_length = block_length;
  out_.n_blocks = n_blocks;
  out_.maxima.reserve(n_blocks);
}

BlockMaxima BlockMaximaAccumulator::release() {
  if (!done()) throw NumericalError("block_maxima", "stream ended before all blocks were filled");
  out_.maxima.resize(out_.n_blocks);
  return std::move(out_);
}

std::vector<std::vector<double>> partition(const BlockMaxima& maxima, std::size_t n_samp) {
  const std::size_t n = maxima.maxima.size();
  if (n_samp == 0 || n % n_samp != 0) {
    throw ConfigError("partition: N_samp = " + std::to_string(n_samp) + " does not divide N_bmax = " + std::to_string(n));
  }
  const std::size_t size = n / n_samp;
  std::vector<std::vector<double>> parts;
  parts.reserve(n_samp);
  for (std::size_t s = 0; s < n_samp; ++s) {
    const auto first = maxima.maxima.begin() + static_cast<std::ptrdiff_t>(s * size);
    parts.emplace_back(first, first + static_cast<std::ptrdiff_t>(size));
  }
  return parts;
}

std::size_t generic_point_steps(const SystemSpec& system, std::optional<double> sample_interval) {
  if (system.kind() == SystemKind::map) return 100000;
  const double dt = sample_interval.value_or(system.default_sample_interval());
  return static_cast<std::size_t>(std::llround(1000.0 / dt));
}

StateVector generic_point(const SystemSpec& system, std::uint64_t seed) {
  OrbitConfig cfg;
  cfg.seed = seed;
  cfg.transient = generic_point_steps(system);
  cfg.n_samples = 1;
  return to_cartesian(system, orbit(system, cfg).back());
}

StateVector radial_perturb(const StateVector& p, double t) {
  StateVector out = p;
  for (std::size_t i = 0; i < p.dim(); ++i) out[i] = (1.0 + t) * p[i];
  return out;
}

}  // namespace exdyn
