// exdyn: block-maxima tail estimation for chaotic maps and flows.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "exdyn/error.hpp"
#include "exdyn/harness.hpp"
#include "spec_strings.hpp"

namespace {

using namespace exdyn;

struct Common {
  std::string config;
  std::string system;
  std::string observable;
  std::optional<std::size_t> blocklen;
  std::optional<std::size_t> bmax;
  std::optional<std::size_t> nsamp;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> transient;
  std::string out;
  std::string format = "csv";
  std::string profile;
  bool predict = false;
};

void add_common(CLI::App* cmd, Common& c, bool with_format) {
  cmd->add_option("--config", c.config, "Experiment config (JSON)");
  cmd->add_option("--system", c.system, "System, e.g. henon:a=1.4,b=0.3");
  cmd->add_option("--observable", c.observable, "Observable, e.g. power_sum:a=2,b=1,x_M=0.51,y_M=0.51");
  cmd->add_option("--blocklen", c.blocklen, "Block length N_blocklen");
  cmd->add_option("--bmax", c.bmax, "Number of block maxima N_bmax");
  cmd->add_option("--nsamp", c.nsamp, "Sub-samples N_samp");
  cmd->add_option("--seed", c.seed, "Base seed");
  cmd->add_option("--transient", c.transient, "Discarded initial steps");
  cmd->add_option("--out", c.out, "Output path (default stdout)");
  cmd->add_option("--profile", c.profile, "Size preset")->check(CLI::IsMember({"fast", "paper"}));
  if (with_format) cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

// Config from --config, then flag overrides.
ExperimentConfig build_config(const Common& c, bool need_observable = true) {
  ExperimentConfig cfg;
  if (!c.config.empty()) {
    cfg = load_config(c.config);
  } else {
    if (c.system.empty()) throw ConfigError("either --config or --system is required");
    if (need_observable && c.observable.empty()) throw ConfigError("either --config or --observable is required");
  }
  if (!c.system.empty()) cfg.system = cli::parse_system(c.system);
  if (!c.observable.empty()) cli::apply_observable(c.observable, cfg);
  if (!c.profile.empty()) std::tie(cfg.N_blocklen, cfg.N_bmax) = profile_sizes(profile_from_string(c.profile));
  if (c.blocklen) cfg.N_blocklen = *c.blocklen;
  if (c.bmax) cfg.N_bmax = *c.bmax;
  if (c.nsamp) cfg.N_samp = *c.nsamp;
  if (c.seed) cfg.seed = *c.seed;
  if (c.transient) cfg.transient = *c.transient;
  if (c.predict && !cfg.prediction) cfg.prediction = PredictionRequest{};
  return cfg;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
  } else {
    write_text(path, text);
  }
}

int cmd_simulate(const Common& c, std::size_t n) {
  ExperimentConfig cfg = build_config(c, false);
  OrbitConfig oc;
  oc.transient = cfg.transient;
  oc.n_samples = n;
  oc.seed = cfg.seed;
  oc.sample_interval = cfg.sample_interval;
  oc.substeps_per_sample = cfg.substeps_per_sample;
  std::ostringstream s;
  s << "# system " << cfg.system.name() << " seed " << cfg.seed << " transient " << cfg.transient << '\n';
  if (!c.observable.empty() || !c.config.empty()) {
    cfg.validate();
    const ObservableSpec obs = resolved_observable(cfg);
    const ScalarSeries ser = series(cfg.system, obs, oc);
    s << "# observable " << ser.meta.observable << '\n';
    for (double v : ser.values) s << format_double(v) << '\n';
  } else {
    // No observable: Cartesian states, one per line.
    for_each_state(cfg.system, oc, [&](const auto& m, const StateVector& st) {
      const StateVector p = detail::cartesian(m, st);
      for (std::size_t i = 0; i < p.dim(); ++i) s << (i ? " " : "") << format_double(p[i]);
      s << '\n';
    });
  }
  emit(c.out, s.str());
  return 0;
}

int cmd_fit(const Common& c, const std::string& input) {
  const auto values = read_series(input);
  const std::size_t L = c.blocklen.value_or(1);
  if (L == 0) throw ConfigError("--blocklen must be positive");
  const std::size_t nb = c.bmax.value_or(values.size() / L);
  const std::size_t ns = c.nsamp.value_or(1);
  const EstimateReport rep = estimate_from_series(values, L, nb, ns);
  emit(c.out, c.format == "json" ? report_to_json(rep) : report_to_csv(rep));
  return 0;
}

int cmd_sweep(const Common& c) {
  const ExperimentConfig cfg = build_config(c);
  const auto rows = run_sweep(cfg);
  emit(c.out, c.format == "json" ? rows_to_json(rows) : rows_to_csv(rows));
  int failed = 0;
  for (const auto& r : rows) {
    if (r.error) {
      std::cerr << "exdyn: row " << format_double(r.sweep_value) << " failed: " << *r.error << '\n';
      ++failed;
    }
  }
  return failed ? 2 : 0;
}

int cmd_diagnose(const Common& c, const std::string& input, std::optional<double> bandwidth, std::size_t points) {
  const auto values = read_series(input);
  const GevParams params = fit_gev(values);
  double lo = values.front(), hi = values.front();
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  // Silverman's rule unless given.
  double h = 0.0;
  if (bandwidth) {
    h = *bandwidth;
  } else {
    const LMoments lm = sample_l_moments(values);
    const double sd = lm.l2 * std::sqrt(3.141592653589793);
    h = 1.06 * sd * std::pow(static_cast<double>(values.size()), -0.2);
  }
  if (points < 2) throw ConfigError("--points must be at least 2");
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  const auto dens = kernel_density(values, h, grid);
  const auto qq = qq_data(values, params);
  std::ostringstream s;
  if (c.format == "json") {
    s << "{\n  \"params\": {\"mu\": " << format_double(params.mu) << ", \"sigma\": " << format_double(params.sigma)
      << ", \"xi\": " << format_double(params.xi) << "},\n  \"bandwidth\": " << format_double(h)
      << ",\n  \"kde\": [";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      s << (i ? ", " : "") << "[" << format_double(grid[i]) << ", " << format_double(dens[i]) << "]";
    }
    s << "],\n  \"qq\": [";
    for (std::size_t i = 0; i < qq.size(); ++i) {
      s << (i ? ", " : "") << "[" << format_double(qq[i].empirical) << ", " << format_double(qq[i].theoretical) << "]";
    }
    s << "]\n}\n";
  } else {
    s << "# gev mu=" << format_double(params.mu) << " sigma=" << format_double(params.sigma)
      << " xi=" << format_double(params.xi) << " bandwidth=" << format_double(h) << '\n';
    s << "table,x,y\n";
    for (std::size_t i = 0; i < grid.size(); ++i) s << "kde," << format_double(grid[i]) << ',' << format_double(dens[i]) << '\n';
    for (const auto& q : qq) s << "qq," << format_double(q.empirical) << ',' << format_double(q.theoretical) << '\n';
  }
  emit(c.out, s.str());
  return 0;
}

int cmd_predict(Common c, std::optional<double> dimension, double d_tilde_s) {
  c.predict = true;
  ExperimentConfig cfg = build_config(c);
  if (dimension) cfg.prediction->dimension = dimension;
  cfg.prediction->d_tilde_s = d_tilde_s;
  cfg.validate();
  const auto p = predict_experiment(cfg);
  if (!p) {
    std::cerr << "exdyn: no tail-index formula for " << cfg.system.name() << " with "
              << cfg.observable.describe() << '\n';
    emit(c.out, "null\n");
    return 0;
  }
  emit(c.out, prediction_to_json(*p));
  return 0;
}

int cmd_lyapunov(const Common& c, std::size_t n) {
  const ExperimentConfig cfg = build_config(c, false);
  const auto spec = lyapunov_spectrum(cfg.system, n, cfg.transient, cfg.seed);
  emit(c.out, spectrum_to_json(spec, lyapunov_dimension(spec)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extreme value statistics of chaotic dynamical systems"};
  app.require_subcommand(1);

  Common sim_c, fit_c, sweep_c, diag_c, pred_c, lyap_c;
  std::size_t sim_n = 1000, lyap_n = 1000000, diag_points = 512;
  std::string fit_in, diag_in;
  std::optional<double> diag_bw, pred_dim;
  double pred_dts = 0.0;

  auto* sim = app.add_subcommand("simulate", "Emit a raw orbit or observable series");
  add_common(sim, sim_c, false);
  sim->add_option("--n", sim_n, "Number of samples");

  auto* fit = app.add_subcommand("fit", "Fit the GEV to a series file via block maxima");
  add_common(fit, fit_c, true);
  fit->add_option("input", fit_in, "Series file, one value per line")->required();

  auto* sweep = app.add_subcommand("sweep", "Run an experiment or sweep and emit SweepRow tables");
  add_common(sweep, sweep_c, true);
  sweep->add_flag("--predict", sweep_c.predict, "Fill predicted_xi");

  auto* diag = app.add_subcommand("diagnose", "Kernel density and QQ tables for a maxima file");
  add_common(diag, diag_c, true);
  diag->add_option("input", diag_in, "Maxima file, one value per line")->required();
  diag->add_option("--bandwidth", diag_bw, "Gaussian kernel bandwidth");
  diag->add_option("--points", diag_points, "Grid points");

  auto* pred = app.add_subcommand("predict", "Print the conjectured tail index");
  add_common(pred, pred_c, false);
  pred->add_option("--dimension", pred_dim, "Attractor dimension (default: Lyapunov dimension)");
  pred->add_option("--d-tilde-s", pred_dts, "Lorenz63 planar correction");

  auto* lyap = app.add_subcommand("lyapunov", "Lyapunov spectrum and Kaplan-Yorke dimension");
  add_common(lyap, lyap_c, false);
  lyap->add_option("--n", lyap_n, "Map steps or flow sample intervals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sim) return cmd_simulate(sim_c, sim_n);
    if (*fit) return cmd_fit(fit_c, fit_in);
    if (*sweep) return cmd_sweep(sweep_c);
    if (*diag) return cmd_diagnose(diag_c, diag_in, diag_bw, diag_points);
    if (*pred) return cmd_predict(pred_c, pred_dim, pred_dts);
    if (*lyap) return cmd_lyapunov(lyap_c, lyap_n);
  } catch (const DivergenceError& e) {
    std::cerr << "exdyn: numerical failure [" << e.stage() << "] at step " << e.index() << ": " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "exdyn: numerical failure [" << e.stage() << "]: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "exdyn: configuration error: " << e.what() << '\n';
    return 1;
  } catch (const IoError& e) {
    std::cerr << "exdyn: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
