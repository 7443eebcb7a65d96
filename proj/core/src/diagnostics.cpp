#include <algorithm>
#include <cmath>
#include <numbers>

#include "exdyn/error.hpp"
#include "exdyn/harness.hpp"

namespace exdyn {

std::vector<double> kernel_density(std::span<const double> values, double bandwidth, std::span<const double> grid) {
  if (values.empty()) throw ConfigError("kernel_density: empty sample");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw ConfigError("kernel_density: bandwidth must be positive");
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  // Kernel mass beyond 9 bandwidths is below 1e-18.
  const double reach = 9.0 * bandwidth;
  const double norm = 1.0 / (static_cast<double>(x.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> out;
  out.reserve(grid.size());
  for (double g : grid) {
    auto lo = std::lower_bound(x.begin(), x.end(), g - reach);
    auto hi = std::upper_bound(lo, x.end(), g + reach);
    double acc = 0.0;
    for (auto it = lo; it != hi; ++it) {
      const double z = (g - *it) / bandwidth;
      acc += std::exp(-0.5 * z * z);
    }
    out.push_back(acc * norm);
  }
  return out;
}

std::vector<QQPoint> qq_data(std::span<const double> maxima, const GevParams& params) {
  if (maxima.empty()) throw ConfigError("qq_data: empty sample");
  std::vector<double> x(maxima.begin(), maxima.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  std::vector<QQPoint> out;
  out.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out.push_back({x[i], gev_quantile(params, (static_cast<double>(i) + 0.5) / n)});
  }
  return out;
}

}  // namespace exdyn
