#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "exdyn/analysis.hpp"
#include "exdyn/dynamics.hpp"
#include "exdyn/extremes.hpp"
#include "exdyn/gevfit.hpp"
#include "exdyn/observables.hpp"

namespace exdyn {

enum class Profile { fast, paper };
Profile profile_from_string(std::string_view name);

// N_blocklen and N_bmax presets: fast 10^3 / 10^3, paper 10^4 / 10^4.
std::pair<std::size_t, std::size_t> profile_sizes(Profile p) noexcept;

struct SweepSpec {
  // An observable or system parameter, or "N_blocklen" for a block-length sweep.
  std::string param;
  std::vector<double> values;
};

struct ExperimentConfig {
  SystemSpec system = SystemSpec::thom();
  ObservableSpec observable;
  // Replace observable.center with radial_perturb(generic_point, radial_t).
  bool generic_center = false;
  double radial_t = 0.0;
  std::size_t N_blocklen = 1000;
  std::size_t N_bmax = 1000;
  std::size_t N_samp = 100;
  std::uint64_t seed = 0;
  std::size_t transient = 100000;
  std::optional<double> sample_interval;
  std::size_t substeps_per_sample = 10;
  std::optional<SweepSpec> sweep;
  std::optional<PredictionRequest> prediction;

  // Throws ConfigError on violated invariants.
  void validate() const;
};

// JSON with field names matching ExperimentConfig. A top-level "profile"
// supplies N_blocklen / N_bmax when those are absent.
ExperimentConfig parse_config(std::string_view json);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& cfg);

// The observable with its centre filled in.
ObservableSpec resolved_observable(const ExperimentConfig& cfg);
// Orbit settings for N_blocklen * N_bmax samples.
OrbitConfig orbit_config(const ExperimentConfig& cfg);

// Streams the orbit and returns the block maxima without storing the series.
BlockMaxima experiment_maxima(const ExperimentConfig& cfg);

EstimateReport run_experiment(const ExperimentConfig& cfg);

// Block maxima and fit from an existing series (e.g. a series file).
EstimateReport estimate_from_series(std::span<const double> values, std::size_t block_length, std::size_t n_bmax,
                                    std::size_t n_samp);

struct SweepRow {
  double sweep_value = 0.0;
  double mu_hat = 0.0;
  double sigma_hat = 0.0;
  double xi_hat = 0.0;
  double s_mu = 0.0;
  double s_sigma = 0.0;
  double s_xi = 0.0;
  std::optional<double> predicted_xi;
  std::size_t n_iterates_used = 0;
  // Set when this row failed; estimates are then NaN.
  std::optional<std::string> error;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

// Every row uses cfg.seed, so row k equals run_experiment on the config with
// N_blocklen = blocklens[k]. One orbit serves all rows.
std::vector<SweepRow> blocklen_sweep(const ExperimentConfig& cfg, const std::vector<std::size_t>& blocklens);

// Rows share cfg.seed. Observable parameters are evaluated on one shared
// orbit; system parameters need one orbit per row. A name that exists on both
// is read as the observable's unless prefixed "system.".
std::vector<SweepRow> param_sweep(const ExperimentConfig& cfg, const std::string& param,
                                  const std::vector<double>& values);

// Dispatches on cfg.sweep; without one, a single row for the base config.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg);

// Config with one parameter replaced.
ExperimentConfig with_parameter(const ExperimentConfig& cfg, const std::string& param, double value);

// Prediction requested by cfg.prediction for the resolved observable.
std::optional<TailPrediction> predict_experiment(const ExperimentConfig& cfg);

std::vector<double> kernel_density(std::span<const double> values, double bandwidth, std::span<const double> grid);

struct QQPoint {
  double empirical = 0.0;
  double theoretical = 0.0;
};
// Sorted values against gev_quantile at Hazen positions (i - 0.5) / n.
std::vector<QQPoint> qq_data(std::span<const double> maxima, const GevParams& params);

enum class Format { csv, json };
Format format_from_string(std::string_view name);

void write_rows_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::string rows_to_csv(const std::vector<SweepRow>& rows);
std::string rows_to_json(const std::vector<SweepRow>& rows);
std::vector<SweepRow> rows_from_json(std::string_view json);
std::string report_to_json(const EstimateReport& report, const std::optional<TailPrediction>& prediction = {});
EstimateReport report_from_json(std::string_view json);
std::string report_to_csv(const EstimateReport& report);
std::string prediction_to_json(const TailPrediction& p);
std::string spectrum_to_json(const LyapunovSpectrum& s, double dimension);

// Writes a file, replacing it. Throws IoError naming the path.
void write_text(const std::string& path, std::string_view text);
std::string read_text(const std::string& path);
void export_rows(const std::vector<SweepRow>& rows, const std::string& path, Format format);
void export_report(const EstimateReport& report, const std::string& path, Format format);

// One value per line; blank lines and lines starting with '#' are skipped.
std::vector<double> parse_series(std::string_view text);
std::vector<double> read_series(const std::string& path);

// printf("%.17g")
std::string format_double(double v);

}  // namespace exdyn
