#include <cmath>
#include <limits>

#include "exdyn/error.hpp"
#include "exdyn/gevfit.hpp"
#include "exdyn/rng.hpp"

namespace exdyn {

void GevParams::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(sigma) || !std::isfinite(xi)) {
    throw ConfigError("GEV parameters must be finite");
  }
  if (!(sigma > 0.0)) throw ConfigError("GEV scale sigma must be positive");
}

double GevParams::upper_endpoint() const noexcept {
  return xi < 0.0 ? mu - sigma / xi : std::numeric_limits<double>::infinity();
}

double gev_cdf(const GevParams& params, double x) {
  params.validate();
  const double z = (x - params.mu) / params.sigma;
  if (params.xi == 0.0) return std::exp(-std::exp(-z));
  const double t = 1.0 + params.xi * z;
  if (t <= 0.0) return params.xi > 0.0 ? 0.0 : 1.0;
  // t^(-1/xi) via log1p keeps the xi -> 0 limit continuous.
  return std::exp(-std::exp(-std::log1p(params.xi * z) / params.xi));
}

double gev_quantile(const GevParams& params, double p) {
  params.validate();
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("gev_quantile: p must lie in (0, 1)");
  const double y = -std::log(-std::log(p));
  if (params.xi == 0.0) return params.mu + params.sigma * y;
  return params.mu + params.sigma * std::expm1(params.xi * y) / params.xi;
}

std::vector<double> sample_gev(const GevParams& params, std::size_t n, std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = gev_quantile(params, rng.uniform_open());
  return out;
}

}  // namespace exdyn
