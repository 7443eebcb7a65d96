#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "exdyn/error.hpp"
#include "exdyn/gevfit.hpp"

namespace exdyn {

namespace {

constexpr double kLn2 = std::numbers::ln2;
const double kLn3 = std::log(3.0);
constexpr double kSolveTol = 1e-12;
constexpr int kMaxNewton = 50;
constexpr double kBracketLo = -5.0;
constexpr double kBracketHi = 0.99;

void require_shape(double xi, const char* who) {
  if (!std::isfinite(xi)) throw ConfigError(std::string(who) + ": xi must be finite");
  if (!(xi < 1.0)) throw ConfigError(std::string(who) + ": xi must be < 1");
}

// (1 - Gamma(1 - xi)) / xi, continuous at 0 where it tends to -gamma_E.
double gamma_term(double xi) {
  if (xi == 0.0) return -std::numbers::egamma;
  if (std::abs(xi) < 1e-3) return -std::expm1(std::lgamma(1.0 - xi)) / xi;
  return (1.0 - std::tgamma(1.0 - xi)) / xi;
}

double bisect(double target, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double r = tau3_of_xi(mid) - target;
    if (std::abs(r) <= kSolveTol || hi - lo <= 1e-15) return mid;
    (r < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

LMoments sample_l_moments(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 3) throw ConfigError("sample_l_moments: need at least 3 values, got " + std::to_string(n));
  std::vector<double> x(sample.begin(), sample.end());
  for (double v : x) {
    if (!std::isfinite(v)) throw NumericalError("lmoments", "non-finite value in sample");
  }
  std::sort(x.begin(), x.end());
  const double nm1 = static_cast<double>(n - 1);
  const double nm2 = static_cast<double>(n - 2);
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double j = static_cast<double>(i);  // i - 1 in one-based order statistics
    s0 += x[i];
    s1 += x[i] * j;
    s2 += x[i] * j * (j - 1.0);
  }
  const double dn = static_cast<double>(n);
  const double b0 = s0 / dn;
  const double b1 = s1 / (dn * nm1);
  const double b2 = s2 / (dn * nm1 * nm2);
  return {b0, 2.0 * b1 - b0, 6.0 * b2 - 6.0 * b1 + b0};
}

double tau3_of_xi(double xi) noexcept {
  if (xi == 0.0) return 2.0 * kLn3 / kLn2 - 3.0;
  return 2.0 * std::expm1(xi * kLn3) / std::expm1(xi * kLn2) - 3.0;
}

double tau3_of_xi_derivative(double xi) noexcept {
  const double a = kLn3, b = kLn2;
  if (std::abs(xi) < 1e-4) {
    // Taylor expansion of 2 (e^{a xi} - 1) / (e^{b xi} - 1) about 0.
    const double c1 = (a / b) * (a - b) / 2.0;
    const double c2 = (a / b) * ((a * a - b * b) / 6.0 - b * (a - b) / 4.0);
    return 2.0 * (c1 + 2.0 * c2 * xi);
  }
  const double e3 = std::expm1(a * xi), e2 = std::expm1(b * xi);
  return 2.0 * (a * (e3 + 1.0) * e2 - b * (e2 + 1.0) * e3) / (e2 * e2);
}

double solve_xi(double tau3) {
  if (!std::isfinite(tau3) || !(tau3 > -1.0 && tau3 < 1.0)) {
    throw ConfigError("solve_xi: tau3 must lie in (-1, 1), got " + std::to_string(tau3));
  }
  // The rational start is tabulated for k = -xi.
  const double z = 2.0 / (3.0 + tau3) - kLn2 / kLn3;
  double xi = -(7.859 * z + 2.9554 * z * z);

  double lo = kBracketLo, hi = kBracketHi;
  while (tau3_of_xi(lo) > tau3 && lo > -100.0) lo *= 2.0;
  if (tau3_of_xi(lo) > tau3 || tau3_of_xi(hi) < tau3) {
    throw NumericalError("solve_xi", "tau3 = " + std::to_string(tau3) + " has no root in the search bracket");
  }

  for (int it = 0; it < kMaxNewton; ++it) {
    if (!(xi > lo && xi < hi)) break;
    const double r = tau3_of_xi(xi) - tau3;
    if (std::abs(r) <= kSolveTol) return xi;
    const double d = tau3_of_xi_derivative(xi);
    if (!(d > 0.0) || !std::isfinite(d)) break;
    xi -= r / d;
  }
  const double root = bisect(tau3, lo, hi);
  if (!(std::abs(tau3_of_xi(root) - tau3) <= 1e-10)) {
    throw NumericalError("solve_xi", "no convergence for tau3 = " + std::to_string(tau3));
  }
  return root;
}

double sigma_from(double l2, double xi) {
  require_shape(xi, "sigma_from");
  if (!(l2 > 0.0) || !std::isfinite(l2)) throw ConfigError("sigma_from: lambda_2 must be positive");
  if (xi == 0.0) return l2 / kLn2;
  return xi * l2 / (std::expm1(xi * kLn2) * std::tgamma(1.0 - xi));
}

double mu_from(double l1, double sigma, double xi) {
  require_shape(xi, "mu_from");
  if (!(sigma > 0.0)) throw ConfigError("mu_from: sigma must be positive");
  return l1 + sigma * gamma_term(xi);
}

LMoments population_l_moments(const GevParams& params) {
  params.validate();
  require_shape(params.xi, "population_l_moments");
  const double xi = params.xi;
  const double l1 = params.mu - params.sigma * gamma_term(xi);
  const double l2 =
      xi == 0.0 ? params.sigma * kLn2 : params.sigma * std::expm1(xi * kLn2) * std::tgamma(1.0 - xi) / xi;
  return {l1, l2, tau3_of_xi(xi) * l2};
}

GevParams fit_from_l_moments(const LMoments& lm) {
  if (!(lm.l2 > 0.0) || !std::isfinite(lm.l2)) {
    throw NumericalError("fit", "degenerate sample: lambda_2 = " + std::to_string(lm.l2));
  }
  const double t3 = lm.tau3();
  if (!(t3 > -1.0 && t3 < 1.0)) throw NumericalError("fit", "tau3 = " + std::to_string(t3) + " out of range");
  GevParams p;
  p.xi = solve_xi(t3);
  p.sigma = sigma_from(lm.l2, p.xi);
  p.mu = mu_from(lm.l1, p.sigma, p.xi);
  return p;
}

GevParams fit_gev(std::span<const double> sample) { return fit_from_l_moments(sample_l_moments(sample)); }

EstimateReport summarize(std::vector<GevParams> per_subsample) {
  EstimateReport rep;
  const std::size_t n = per_subsample.size();
  if (n == 0) throw ConfigError("summarize: no sub-sample fits");
  auto stats = [&](auto get, double& mean, double& sd) {
    const double first = get(per_subsample.front());
    bool all_equal = true;
    double sum = 0.0;
    for (const auto& p : per_subsample) {
      sum += get(p);
      all_equal = all_equal && get(p) == first;
    }
    if (all_equal) {
      mean = first;
      sd = 0.0;
      return;
    }
    mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& p : per_subsample) ss += (get(p) - mean) * (get(p) - mean);
    sd = std::sqrt(ss / static_cast<double>(n));
  };
  stats([](const GevParams& p) { return p.mu; }, rep.mu_hat, rep.s_mu);
  stats([](const GevParams& p) { return p.sigma; }, rep.sigma_hat, rep.s_sigma);
  stats([](const GevParams& p) { return p.xi; }, rep.xi_hat, rep.s_xi);
  rep.N_samp = n;
  rep.per_subsample = std::move(per_subsample);
  return rep;
}

EstimateReport fit_with_uncertainty(const BlockMaxima& maxima, std::size_t n_samp) {
  const auto parts = partition(maxima, n_samp);
  std::vector<GevParams> fits;
  fits.reserve(parts.size());
  for (std::size_t s = 0; s < parts.size(); ++s) {
    try {
      fits.push_back(fit_gev(parts[s]));
    } catch (const std::exception& e) {
      throw NumericalError("fit", "sub-sample " + std::to_string(s) + ": " + e.what());
    }
  }
  EstimateReport rep = summarize(std::move(fits));
  rep.N_bmax = maxima.maxima.size();
  rep.N_blocklen = maxima.block_length;
  return rep;
}

}  // namespace exdyn
