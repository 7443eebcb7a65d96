#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exdyn/dynamics.hpp"
#include "exdyn/observables.hpp"

namespace exdyn {

struct LyapunovSpectrum {
  std::vector<double> exponents;  // descending
  std::size_t n_steps = 0;        // map steps or flow sample intervals
  double total_time = 0.0;
  std::size_t kinks_skipped = 0;  // Lozi: tangent updates skipped at x = 0
};

// Tangent-space QR accumulation (modified Gram-Schmidt). Maps are
// reorthonormalised every step; flows integrate the variational equation with
// RK4 alongside the state and reorthonormalise once per sample interval.
// Throws ConfigError for n_steps < 1000, DivergenceError on blow-up.
LyapunovSpectrum lyapunov_spectrum(const SystemSpec& system, std::size_t n_steps, std::size_t transient = 100000,
                                   std::uint64_t seed = 0);

// Kaplan-Yorke dimension. Partial sums within 1e-12 of zero count as
// nonnegative so that volume-preserving spectra give the full dimension.
double lyapunov_dimension(const LyapunovSpectrum& spectrum);
double lyapunov_dimension(const std::vector<double>& exponents);

// 1 + log 2 / log(1/lambda).
double solenoid_hausdorff_dim(double lambda);

struct TailPrediction {
  double neg_inv_xi = 0.0;
  double xi = 0.0;
  std::string source;
  ParamMap inputs;
};

// Builds a prediction from -1/xi; throws ConfigError unless it is positive.
TailPrediction make_prediction(double neg_inv_xi, std::string source, ParamMap inputs);

// Distance observable on the cat map: 2/alpha inside the closed unit square,
// 3/2 with exactly one coordinate in [0,1], 2 with neither.
TailPrediction predict_thom_alpha(const StateVector& p_M, double alpha);
TailPrediction predict_thom_ab(double a, double b);

enum class SolenoidObservable { dist_power_on_attractor, planar };
TailPrediction predict_solenoid(SolenoidObservable kind, double lambda, double alpha = 1.0);

TailPrediction predict_general(double d_u, double d_s);
TailPrediction predict_dist_power_on_attractor(double dim, double alpha);
TailPrediction predict_lorenz63_planar(double beta, double d_tilde_s = 0.0);

// Real eigenvalues of the Lorenz63 Jacobian at the origin, descending.
std::array<double, 3> lorenz63_origin_eigenvalues(double sigma = 10.0, double rho = 28.0, double beta = 8.0 / 3.0);

// |lambda_s| / lambda_u with the rounded values quoted for the classical
// parameters, (8/3) / 11.83.
constexpr double kLorenz63Beta = (8.0 / 3.0) / 11.83;
// Same ratio from the computed eigenvalues.
double lorenz63_beta(double sigma = 10.0, double rho = 28.0, double beta = 8.0 / 3.0);

// Options for the dispatcher below.
struct PredictionRequest {
  // Attractor dimension; nullopt computes dim_L from a Lyapunov spectrum.
  std::optional<double> dimension;
  // 0 picks 10^6 map steps or 2 * 10^5 flow sample intervals.
  std::size_t lyapunov_steps = 0;
  std::size_t lyapunov_transient = 100000;
  std::uint64_t seed = 0;
  double d_tilde_s = 0.0;
};

// Dimension fed into the predictions: exact for the solenoid, Kaplan-Yorke
// otherwise (or request.dimension when set).
double prediction_dimension(const SystemSpec& system, const PredictionRequest& request);

// The conjectured tail index for a system/observable pairing, or nullopt
// where no formula is available (e.g. Lozi planar observables, Thom planes).
// The observable must carry a resolved centre for distance families.
std::optional<TailPrediction> predict_for(const SystemSpec& system, const ObservableSpec& obs,
                                          const PredictionRequest& request = {});

}  // namespace exdyn
