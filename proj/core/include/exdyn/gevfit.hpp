#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "exdyn/extremes.hpp"

namespace exdyn {

// Generalised extreme value parameters in the convention
//   G(x) = exp(-[1 + xi (x - mu) / sigma]^(-1/xi)),
// so xi < 0 is the Weibull case with upper endpoint mu - sigma / xi.
struct GevParams {
  double mu = 0.0;
  double sigma = 1.0;
  double xi = 0.0;

  // Throws ConfigError unless sigma > 0 and all values are finite.
  void validate() const;
  // mu - sigma / xi for xi < 0, +inf otherwise.
  double upper_endpoint() const noexcept;

  friend bool operator==(const GevParams&, const GevParams&) = default;
};

struct LMoments {
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;

  double tau3() const noexcept { return l3 / l2; }
};

struct EstimateReport {
  double mu_hat = 0.0;
  double sigma_hat = 0.0;
  double xi_hat = 0.0;
  double s_mu = 0.0;
  double s_sigma = 0.0;
  double s_xi = 0.0;
  std::size_t N_bmax = 0;
  std::size_t N_blocklen = 0;
  std::size_t N_samp = 0;
  std::vector<GevParams> per_subsample;
};

double gev_cdf(const GevParams& params, double x);

// Inverse CDF, x = mu + sigma ((-log p)^(-xi) - 1) / xi. Throws ConfigError
// unless 0 < p < 1.
double gev_quantile(const GevParams& params, double p);

// n draws by inversion of seeded uniforms on (0, 1).
std::vector<double> sample_gev(const GevParams& params, std::size_t n, std::uint64_t seed);

// Unbiased sample L-moments from probability-weighted moments b0, b1, b2.
// Throws ConfigError for fewer than 3 values.
LMoments sample_l_moments(std::span<const double> sample);

// Population L-moments of a GEV distribution (requires xi < 1).
LMoments population_l_moments(const GevParams& params);

// Right-hand side of the shape equation, 2 (1 - 3^xi) / (1 - 2^xi) - 3,
// continuous through xi = 0, and its derivative.
double tau3_of_xi(double xi) noexcept;
double tau3_of_xi_derivative(double xi) noexcept;

// Inverts tau3_of_xi by Newton's method from Hosking's rational start,
// safeguarded by bisection. Throws ConfigError outside (-1, 1) and
// NumericalError if no root is found.
double solve_xi(double tau3);

// Scale and location from lambda_2, lambda_1 given xi < 1.
double sigma_from(double l2, double xi);
double mu_from(double l1, double sigma, double xi);

// Composition L-moments -> xi -> sigma -> mu.
GevParams fit_from_l_moments(const LMoments& lm);
GevParams fit_gev(std::span<const double> sample);

// Splits the maxima into N_samp sub-samples, fits each, and reports means and
// population standard deviations. A failing sub-sample raises NumericalError
// naming its index.
EstimateReport fit_with_uncertainty(const BlockMaxima& maxima, std::size_t n_samp);

// Rebuilds means and standard deviations from per-subsample fits.
EstimateReport summarize(std::vector<GevParams> per_subsample);

}  // namespace exdyn
