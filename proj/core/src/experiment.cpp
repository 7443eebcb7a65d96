#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "exdyn/error.hpp"
#include "exdyn/harness.hpp"
#include "exdyn/rng.hpp"

namespace exdyn {

namespace {

// Largest fine block-maxima buffer for a fused block-length sweep.
constexpr std::size_t kFusedLimit = std::size_t{1} << 25;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t checked_product(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) throw ConfigError("orbit length overflows");
  return a * b;
}

// One orbit, several observables, one accumulator each.
std::vector<BlockMaxima> fused_maxima(const SystemSpec& system, OrbitConfig oc, const std::vector<ObservableSpec>& obs,
                                      std::size_t block_length, std::size_t n_blocks) {
  oc.n_samples = checked_product(block_length, n_blocks);
  std::vector<Observable> phis;
  std::vector<BlockMaximaAccumulator> accs;
  for (const auto& o : obs) {
    o.check_dim(system.state_dim());
    phis.emplace_back(o);
    accs.emplace_back(block_length, n_blocks);
  }
  if (phis.size() == 1) {
    const Observable& phi = phis.front();
    BlockMaximaAccumulator& acc = accs.front();
    for_each_state(system, oc, [&](const auto& m, const StateVector& s) { acc.push(phi(detail::cartesian(m, s))); });
  } else {
    for_each_state(system, oc, [&](const auto& m, const StateVector& s) {
      const StateVector p = detail::cartesian(m, s);
      for (std::size_t k = 0; k < phis.size(); ++k) accs[k].push(phis[k](p));
    });
  }
  std::vector<BlockMaxima> out;
  out.reserve(accs.size());
  for (auto& a : accs) out.push_back(a.release());
  return out;
}

SweepRow make_row(double value, const EstimateReport& rep, std::size_t n_iterates) {
  SweepRow r;
  r.sweep_value = value;
  r.mu_hat = rep.mu_hat;
  r.sigma_hat = rep.sigma_hat;
  r.xi_hat = rep.xi_hat;
  r.s_mu = rep.s_mu;
  r.s_sigma = rep.s_sigma;
  r.s_xi = rep.s_xi;
  r.n_iterates_used = n_iterates;
  return r;
}

SweepRow failed_row(double value, std::size_t n_iterates, const std::exception& e) {
  SweepRow r;
  r.sweep_value = value;
  r.mu_hat = r.sigma_hat = r.xi_hat = r.s_mu = r.s_sigma = r.s_xi = kNaN;
  r.n_iterates_used = n_iterates;
  if (const auto* ne = dynamic_cast<const NumericalError*>(&e)) {
    r.error = ne->stage() + ": " + e.what();
  } else {
    r.error = e.what();
  }
  return r;
}

bool needs_dimension(const SystemSpec& system) {
  switch (system.id()) {
    case SystemId::henon:
    case SystemId::lozi:
    case SystemId::lorenz63:
    case SystemId::lorenz84:
      return true;
    default:
      return false;
  }
}

// Same request with the attractor dimension computed once, so that rows
// sharing a system do not repeat the Lyapunov run.
std::optional<PredictionRequest> pinned_request(const ExperimentConfig& cfg) {
  if (!cfg.prediction) return std::nullopt;
  PredictionRequest r = *cfg.prediction;
  if (!r.dimension && needs_dimension(cfg.system)) r.dimension = prediction_dimension(cfg.system, r);
  return r;
}

std::optional<double> predicted_xi(const SystemSpec& system, const ObservableSpec& obs,
                                   const std::optional<PredictionRequest>& req) {
  if (!req) return std::nullopt;
  const auto p = predict_for(system, obs, *req);
  if (!p) return std::nullopt;
  return p->xi;
}

enum class Target { observable, system };

struct ParamRef {
  Target target;
  std::string name;
};

bool observable_has(const ObservableSpec& o, std::string_view name) {
  switch (o.family) {
    case ObservableFamily::dist_power:
      return name == "alpha" || name == "x_M" || name == "y_M" || name == "z_M" || name == "radial_t";
    case ObservableFamily::power_sum:
      return name == "a" || name == "b" || name == "x_M" || name == "y_M" || name == "radial_t";
    case ObservableFamily::linear:
      return name == "a" || name == "b" || name == "c" || name == "d";
    case ObservableFamily::plane_theta_xy:
    case ObservableFamily::plane_theta_xz:
    case ObservableFamily::plane_theta_2d:
      return name == "theta" || name == "x0" || name == "y0" || name == "z0";
    case ObservableFamily::coord_x:
      return false;
  }
  return false;
}

ParamRef classify(const ExperimentConfig& cfg, const std::string& param) {
  if (param.rfind("system.", 0) == 0) return {Target::system, param.substr(7)};
  if (param.rfind("observable.", 0) == 0) return {Target::observable, param.substr(11)};
  if (observable_has(cfg.observable, param)) return {Target::observable, param};
  const auto sp = cfg.system.params();
  if (sp.find(param) != sp.end()) return {Target::system, param};
  throw ConfigError("sweep parameter '" + param + "' is not a parameter of " + cfg.observable.describe() + " or " +
                    std::string(cfg.system.name()));
}

void set_observable_param(ExperimentConfig& cfg, const std::string& name, double value) {
  ObservableSpec& o = cfg.observable;
  if (!observable_has(o, name)) {
    throw ConfigError(std::string(to_string(o.family)) + " has no parameter '" + name + "'");
  }
  if (name == "radial_t") {
    cfg.radial_t = value;
  } else if (name == "alpha") {
    o.alpha = value;
  } else if (o.family == ObservableFamily::linear) {
    const std::size_t i = name == "a" ? 0 : name == "b" ? 1 : name == "c" ? 2 : 3;
    o.coefficients[i] = value;
  } else if (name == "a") {
    o.a = value;
  } else if (name == "b") {
    o.b = value;
  } else if (name == "theta") {
    o.theta = value;
  } else if (name == "x0" || name == "y0" || name == "z0") {
    o.offset[static_cast<std::size_t>(name[0] - 'x')] = value;
  } else {
    // Centre coordinate. A generic centre is pinned first so the others keep
    // their generic values.
    if (cfg.generic_center) {
      o.center = generic_point(cfg.system, derive_seed(cfg.seed, 1));
      cfg.generic_center = false;
    }
    if (!o.center) throw ConfigError("observable has no centre to modify");
    const auto i = static_cast<std::size_t>(name[0] - 'x');
    if (i >= o.center->dim()) throw ConfigError("centre has no coordinate '" + name + "'");
    (*o.center)[i] = value;
  }
}

}  // namespace

ObservableSpec resolved_observable(const ExperimentConfig& cfg) {
  ObservableSpec o = cfg.observable;
  if (cfg.generic_center) o.center = generic_point(cfg.system, derive_seed(cfg.seed, 1));
  if (cfg.radial_t != 0.0 && o.center) o.center = radial_perturb(*o.center, cfg.radial_t);
  return o;
}

OrbitConfig orbit_config(const ExperimentConfig& cfg) {
  OrbitConfig oc;
  oc.transient = cfg.transient;
  oc.n_samples = checked_product(cfg.N_blocklen, cfg.N_bmax);
  oc.sample_interval = cfg.sample_interval;
  oc.substeps_per_sample = cfg.substeps_per_sample;
  oc.seed = cfg.seed;
  return oc;
}

BlockMaxima experiment_maxima(const ExperimentConfig& cfg) {
  cfg.validate();
  return fused_maxima(cfg.system, orbit_config(cfg), {resolved_observable(cfg)}, cfg.N_blocklen, cfg.N_bmax)
      .front();
}

EstimateReport run_experiment(const ExperimentConfig& cfg) {
  return fit_with_uncertainty(experiment_maxima(cfg), cfg.N_samp);
}

EstimateReport estimate_from_series(std::span<const double> values, std::size_t block_length, std::size_t n_bmax,
                                    std::size_t n_samp) {
  return fit_with_uncertainty(block_maxima(values, block_length, n_bmax), n_samp);
}

std::optional<TailPrediction> predict_experiment(const ExperimentConfig& cfg) {
  if (!cfg.prediction) return std::nullopt;
  return predict_for(cfg.system, resolved_observable(cfg), *cfg.prediction);
}

std::vector<SweepRow> blocklen_sweep(const ExperimentConfig& cfg, const std::vector<std::size_t>& blocklens) {
  std::vector<SweepRow> rows;
  if (blocklens.empty()) return rows;
  cfg.validate();
  for (auto L : blocklens) {
    if (L == 0) throw ConfigError("blocklen_sweep: block lengths must be positive");
  }
  const ObservableSpec obs = resolved_observable(cfg);
  const auto req = pinned_request(cfg);
  const std::optional<double> pred = predicted_xi(cfg.system, obs, req);

  auto per_row = [&](std::size_t L) {
    ExperimentConfig row = cfg;
    row.N_blocklen = L;
    const std::size_t n_it = checked_product(L, cfg.N_bmax);
    try {
      const auto bm = fused_maxima(cfg.system, orbit_config(row), {obs}, L, cfg.N_bmax).front();
      SweepRow r = make_row(static_cast<double>(L), fit_with_uncertainty(bm, cfg.N_samp), n_it);
      r.predicted_xi = pred;
      return r;
    } catch (const NumericalError& e) {
      return failed_row(static_cast<double>(L), n_it, e);
    }
  };

  std::size_t g = 0;
  for (auto L : blocklens) g = std::gcd(g, L);
  const std::size_t longest = *std::max_element(blocklens.begin(), blocklens.end());
  const std::size_t fine_count = checked_product(longest / g, cfg.N_bmax);

  if (fine_count <= kFusedLimit && blocklens.size() > 1) {
    // Fine maxima at the common divisor, coarsened per row. Maxima are exact,
    // so each row matches its stand-alone run bit for bit.
    std::optional<BlockMaxima> fine;
    try {
      fine = fused_maxima(cfg.system, orbit_config(cfg), {obs}, g, fine_count).front();
    } catch (const NumericalError&) {
      fine.reset();
    }
    if (fine) {
      for (auto L : blocklens) {
        const std::size_t n_it = checked_product(L, cfg.N_bmax);
        try {
          SweepRow r = make_row(static_cast<double>(L),
                                fit_with_uncertainty(coarsen(*fine, L / g, cfg.N_bmax), cfg.N_samp), n_it);
          r.predicted_xi = pred;
          rows.push_back(r);
        } catch (const NumericalError& e) {
          rows.push_back(failed_row(static_cast<double>(L), n_it, e));
        }
      }
      return rows;
    }
  }
  for (auto L : blocklens) rows.push_back(per_row(L));
  return rows;
}

ExperimentConfig with_parameter(const ExperimentConfig& cfg, const std::string& param, double value) {
  ExperimentConfig out = cfg;
  if (param == "N_blocklen") {
    if (!(value >= 1.0) || value != std::floor(value)) throw ConfigError("N_blocklen must be a positive integer");
    out.N_blocklen = static_cast<std::size_t>(value);
    return out;
  }
  const ParamRef ref = classify(cfg, param);
  if (ref.target == Target::system) {
    out.system = cfg.system.with_param(ref.name, value);
  } else {
    set_observable_param(out, ref.name, value);
  }
  return out;
}

std::vector<SweepRow> param_sweep(const ExperimentConfig& cfg, const std::string& param,
                                  const std::vector<double>& values) {
  std::vector<SweepRow> rows;
  if (values.empty()) return rows;
  if (param == "N_blocklen") {
    std::vector<std::size_t> ls;
    for (double v : values) {
      if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError("N_blocklen values must be positive integers");
      ls.push_back(static_cast<std::size_t>(v));
    }
    return blocklen_sweep(cfg, ls);
  }
  cfg.validate();
  const ParamRef ref = classify(cfg, param);
  const std::size_t n_it = checked_product(cfg.N_blocklen, cfg.N_bmax);

  if (ref.target == Target::system) {
    for (double v : values) {
      try {
        const ExperimentConfig row = with_parameter(cfg, param, v);
        row.validate();
        SweepRow r = make_row(v, run_experiment(row), n_it);
        r.predicted_xi = predicted_xi(row.system, resolved_observable(row), pinned_request(row));
        rows.push_back(r);
      } catch (const NumericalError& e) {
        rows.push_back(failed_row(v, n_it, e));
      } catch (const ConfigError& e) {
        rows.push_back(failed_row(v, n_it, e));
      }
    }
    return rows;
  }

  // Observable parameters only: the orbit is shared.
  std::vector<ObservableSpec> obs;
  for (double v : values) {
    const ExperimentConfig row = with_parameter(cfg, param, v);
    row.validate();
    obs.push_back(resolved_observable(row));
  }
  const auto req = pinned_request(cfg);
  std::vector<BlockMaxima> maxima;
  try {
    maxima = fused_maxima(cfg.system, orbit_config(cfg), obs, cfg.N_blocklen, cfg.N_bmax);
  } catch (const NumericalError& e) {
    for (double v : values) rows.push_back(failed_row(v, n_it, e));
    return rows;
  }
  for (std::size_t k = 0; k < values.size(); ++k) {
    try {
      SweepRow r = make_row(values[k], fit_with_uncertainty(maxima[k], cfg.N_samp), n_it);
      r.predicted_xi = predicted_xi(cfg.system, obs[k], req);
      rows.push_back(r);
    } catch (const NumericalError& e) {
      rows.push_back(failed_row(values[k], n_it, e));
    }
  }
  return rows;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
  if (cfg.sweep) return param_sweep(cfg, cfg.sweep->param, cfg.sweep->values);
  cfg.validate();
  const std::size_t n_it = checked_product(cfg.N_blocklen, cfg.N_bmax);
  const double v = static_cast<double>(cfg.N_blocklen);
  try {
    SweepRow r = make_row(v, run_experiment(cfg), n_it);
    if (const auto p = predict_experiment(cfg)) r.predicted_xi = p->xi;
    return {r};
  } catch (const NumericalError& e) {
    return {failed_row(v, n_it, e)};
  }
}

}  // namespace exdyn
