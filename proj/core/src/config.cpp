#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "exdyn/error.hpp"
#include "exdyn/harness.hpp"

namespace exdyn {

using nlohmann::json;

namespace {

void only_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == key;
    if (!ok) throw ConfigError(std::string(where) + ": unknown field '" + key + "'");
  }
}

double real(const json& v, std::string_view what) {
  if (!v.is_number()) throw ConfigError(std::string(what) + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(std::string(what) + " must be finite");
  return d;
}

std::uint64_t whole(const json& v, std::string_view what) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) throw ConfigError(std::string(what) + " must be nonnegative");
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  // Accept 1e4-style literals when they are exact integers.
  const double d = real(v, what);
  if (d < 0.0 || d != std::floor(d) || d > 9007199254740992.0) {
    throw ConfigError(std::string(what) + " must be a nonnegative integer");
  }
  return static_cast<std::uint64_t>(d);
}

std::vector<double> reals(const json& v, std::string_view what) {
  if (!v.is_array()) throw ConfigError(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(real(e, what));
  return out;
}

SystemSpec parse_system(const json& j) {
  if (j.is_string()) return SystemSpec::make(j.get<std::string>());
  if (!j.is_object()) throw ConfigError("system must be an object");
  only_keys(j, "system", {"system_id", "params"});
  if (!j.contains("system_id") || !j["system_id"].is_string()) throw ConfigError("system.system_id is required");
  ParamMap params;
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw ConfigError("system.params must be an object");
    for (const auto& [k, v] : j["params"].items()) params[k] = real(v, "system.params." + k);
  }
  return SystemSpec::make(j["system_id"].get<std::string>(), params);
}

void parse_observable(const json& j, ExperimentConfig& cfg) {
  if (!j.is_object()) throw ConfigError("observable must be an object");
  only_keys(j, "observable",
            {"family", "center", "radial_t", "alpha", "a", "b", "exponents", "coefficients", "theta", "offset",
             "sign_form"});
  if (!j.contains("family") || !j["family"].is_string()) throw ConfigError("observable.family is required");
  ObservableSpec& o = cfg.observable;
  o = ObservableSpec{};
  o.family = observable_family_from_string(j["family"].get<std::string>());
  if (j.contains("center")) {
    const auto& c = j["center"];
    if (c.is_string()) {
      if (c.get<std::string>() != "generic") throw ConfigError("observable.center must be an array or \"generic\"");
      cfg.generic_center = true;
    } else {
      o.center = StateVector::from(reals(c, "observable.center"));
    }
  }
  if (j.contains("radial_t")) cfg.radial_t = real(j["radial_t"], "observable.radial_t");
  if (j.contains("exponents")) {
    const auto e = reals(j["exponents"], "observable.exponents");
    if (e.size() == 1) {
      o.alpha = e[0];
    } else if (e.size() == 2) {
      o.a = e[0];
      o.b = e[1];
    } else {
      throw ConfigError("observable.exponents must hold 1 or 2 values");
    }
  }
  if (j.contains("alpha")) o.alpha = real(j["alpha"], "observable.alpha");
  if (j.contains("a")) o.a = real(j["a"], "observable.a");
  if (j.contains("b")) o.b = real(j["b"], "observable.b");
  if (j.contains("coefficients")) {
    const auto c = reals(j["coefficients"], "observable.coefficients");
    if (c.size() != 4) throw ConfigError("observable.coefficients must hold 4 values");
    std::copy(c.begin(), c.end(), o.coefficients.begin());
  }
  if (j.contains("theta")) o.theta = real(j["theta"], "observable.theta");
  if (j.contains("offset")) {
    const auto c = reals(j["offset"], "observable.offset");
    if (c.empty() || c.size() > 3) throw ConfigError("observable.offset must hold 1 to 3 values");
    o.offset = {0.0, 0.0, 0.0};
    std::copy(c.begin(), c.end(), o.offset.begin());
  }
  if (j.contains("sign_form")) {
    if (!j["sign_form"].is_string()) throw ConfigError("observable.sign_form must be a string");
    o.sign_form = sign_form_from_string(j["sign_form"].get<std::string>());
  }
}

PredictionRequest parse_prediction(const json& j) {
  PredictionRequest r;
  if (j.is_boolean()) return r;
  if (!j.is_object()) throw ConfigError("prediction must be true or an object");
  only_keys(j, "prediction", {"dimension", "lyapunov_steps", "lyapunov_transient", "d_tilde_s"});
  if (j.contains("dimension") && !j["dimension"].is_null()) r.dimension = real(j["dimension"], "prediction.dimension");
  if (j.contains("lyapunov_steps")) r.lyapunov_steps = whole(j["lyapunov_steps"], "prediction.lyapunov_steps");
  if (j.contains("lyapunov_transient")) {
    r.lyapunov_transient = whole(j["lyapunov_transient"], "prediction.lyapunov_transient");
  }
  if (j.contains("d_tilde_s")) r.d_tilde_s = real(j["d_tilde_s"], "prediction.d_tilde_s");
  return r;
}

json observable_json(const ExperimentConfig& cfg) {
  const ObservableSpec& o = cfg.observable;
  json j;
  j["family"] = std::string(to_string(o.family));
  if (cfg.generic_center) {
    j["center"] = "generic";
  } else if (o.center) {
    const auto v = o.center->values();
    j["center"] = std::vector<double>(v.begin(), v.end());
  }
  j["radial_t"] = cfg.radial_t;
  j["alpha"] = o.alpha;
  j["a"] = o.a;
  j["b"] = o.b;
  j["coefficients"] = o.coefficients;
  j["theta"] = o.theta;
  j["offset"] = o.offset;
  j["sign_form"] = std::string(to_string(o.sign_form));
  return j;
}

}  // namespace

Profile profile_from_string(std::string_view name) {
  if (name == "fast") return Profile::fast;
  if (name == "paper") return Profile::paper;
  throw ConfigError("unknown profile '" + std::string(name) + "' (expected fast or paper)");
}

std::pair<std::size_t, std::size_t> profile_sizes(Profile p) noexcept {
  return p == Profile::fast ? std::pair<std::size_t, std::size_t>{1000, 1000}
                            : std::pair<std::size_t, std::size_t>{10000, 10000};
}

void ExperimentConfig::validate() const {
  ObservableSpec probe = observable;
  if (generic_center) {
    if (!probe.uses_center()) throw ConfigError("center \"generic\" given for a family without a centre");
    probe.center = StateVector::from(std::vector<double>(system.state_dim(), 0.0));
  }
  probe.validate();
  probe.check_dim(system.state_dim());
  if (N_blocklen == 0 || N_bmax == 0 || N_samp == 0) throw ConfigError("N_blocklen, N_bmax and N_samp must be positive");
  if (N_bmax % N_samp != 0) {
    throw ConfigError("N_samp = " + std::to_string(N_samp) + " does not divide N_bmax = " + std::to_string(N_bmax));
  }
  if (N_bmax / N_samp < 3) throw ConfigError("each sub-sample needs at least 3 block maxima");
  if (!std::isfinite(radial_t)) throw ConfigError("radial_t must be finite");
  if (sample_interval && !(*sample_interval > 0.0 && std::isfinite(*sample_interval))) {
    throw ConfigError("sample_interval must be positive");
  }
  if (substeps_per_sample == 0) throw ConfigError("substeps_per_sample must be positive");
  if (sweep && sweep->param.empty()) throw ConfigError("sweep.param must be non-empty");
}

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  only_keys(j, "config",
            {"system", "observable", "N_blocklen", "N_bmax", "N_samp", "seed", "transient", "sample_interval",
             "substeps_per_sample", "sweep", "prediction", "profile"});
  ExperimentConfig cfg;
  if (!j.contains("system")) throw ConfigError("config: system is required");
  if (!j.contains("observable")) throw ConfigError("config: observable is required");
  cfg.system = parse_system(j["system"]);
  parse_observable(j["observable"], cfg);
  if (j.contains("profile")) {
    if (!j["profile"].is_string()) throw ConfigError("profile must be a string");
    std::tie(cfg.N_blocklen, cfg.N_bmax) = profile_sizes(profile_from_string(j["profile"].get<std::string>()));
  }
  if (j.contains("N_blocklen")) cfg.N_blocklen = whole(j["N_blocklen"], "N_blocklen");
  if (j.contains("N_bmax")) cfg.N_bmax = whole(j["N_bmax"], "N_bmax");
  if (j.contains("N_samp")) cfg.N_samp = whole(j["N_samp"], "N_samp");
  if (j.contains("seed")) cfg.seed = whole(j["seed"], "seed");
  if (j.contains("transient")) cfg.transient = whole(j["transient"], "transient");
  if (j.contains("sample_interval") && !j["sample_interval"].is_null()) {
    cfg.sample_interval = real(j["sample_interval"], "sample_interval");
  }
  if (j.contains("substeps_per_sample")) cfg.substeps_per_sample = whole(j["substeps_per_sample"], "substeps_per_sample");
  if (j.contains("sweep") && !j["sweep"].is_null()) {
    const auto& s = j["sweep"];
    if (!s.is_object()) throw ConfigError("sweep must be an object");
    only_keys(s, "sweep", {"param", "values"});
    if (!s.contains("param") || !s["param"].is_string()) throw ConfigError("sweep.param is required");
    cfg.sweep = SweepSpec{s["param"].get<std::string>(), s.contains("values") ? reals(s["values"], "sweep.values")
                                                                             : std::vector<double>{}};
  }
  if (j.contains("prediction") && !j["prediction"].is_null() && j["prediction"] != false) {
    cfg.prediction = parse_prediction(j["prediction"]);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) { return parse_config(read_text(path)); }

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["system"] = {{"system_id", std::string(cfg.system.name())}, {"params", json::object()}};
  for (const auto& [k, v] : cfg.system.params()) j["system"]["params"][k] = v;
  j["observable"] = observable_json(cfg);
  j["N_blocklen"] = cfg.N_blocklen;
  j["N_bmax"] = cfg.N_bmax;
  j["N_samp"] = cfg.N_samp;
  j["seed"] = cfg.seed;
  j["transient"] = cfg.transient;
  if (cfg.sample_interval) j["sample_interval"] = *cfg.sample_interval;
  j["substeps_per_sample"] = cfg.substeps_per_sample;
  if (cfg.sweep) j["sweep"] = {{"param", cfg.sweep->param}, {"values", cfg.sweep->values}};
  if (cfg.prediction) {
    json p = json::object();
    if (cfg.prediction->dimension) p["dimension"] = *cfg.prediction->dimension;
    p["lyapunov_steps"] = cfg.prediction->lyapunov_steps;
    p["lyapunov_transient"] = cfg.prediction->lyapunov_transient;
    p["d_tilde_s"] = cfg.prediction->d_tilde_s;
    j["prediction"] = p;
  }
  return j.dump(2) + "\n";
}

}  // namespace exdyn
