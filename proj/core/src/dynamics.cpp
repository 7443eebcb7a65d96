#include "exdyn/dynamics.hpp"

#include <array>
#include <cmath>

#include "exdyn/rng.hpp"

namespace exdyn {

namespace {

constexpr std::array<std::string_view, 6> kNames = {"thom", "solenoid", "henon", "lozi", "lorenz63", "lorenz84"};

void require_finite(std::string_view what, double v) {
  if (!std::isfinite(v)) throw ConfigError(std::string(what) + " must be finite");
}

double take(ParamMap& remaining, std::string_view key, double fallback) {
  auto it = remaining.find(key);
  if (it == remaining.end()) return fallback;
  const double v = it->second;
  remaining.erase(it);
  require_finite(key, v);
  return v;
}

void require_state(const SystemSpec& system, const StateVector& state) {
  if (state.dim() != system.state_dim()) {
    throw ConfigError(std::string(system.name()) + ": state has dimension " + std::to_string(state.dim()) +
                      ", expected " + std::to_string(system.state_dim()));
  }
  if (!state.finite()) throw ConfigError(std::string(system.name()) + ": non-finite state " + state.to_string());
}

}  // namespace

std::string_view to_string(SystemId id) noexcept { return kNames[static_cast<std::size_t>(id)]; }

SystemId system_id_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<SystemId>(i);
  }
  throw ConfigError("unknown system '" + std::string(name) + "'");
}

SystemSpec SystemSpec::make(std::string_view name, const ParamMap& params) {
  return make(system_id_from_string(name), params);
}

SystemSpec SystemSpec::make(SystemId id, const ParamMap& params) {
  ParamMap rest = params;
  Model model;
  switch (id) {
    case SystemId::thom:
      model = ThomMap{};
      break;
    case SystemId::solenoid: {
      SolenoidMap m;
      m.lambda = take(rest, "lambda", m.lambda);
      m.K = take(rest, "K", m.K);
      // Admissible iff some R < 1 satisfies K + lambda R < R and lambda R < K,
      // i.e. K / (1 - lambda) < 1.
      if (!(m.lambda > 0.0 && m.lambda < 0.5)) throw ConfigError("solenoid: lambda must lie in (0, 1/2)");
      if (!(m.K > 0.0 && m.K < 1.0 - m.lambda)) throw ConfigError("solenoid: need 0 < K < 1 - lambda");
      model = m;
      break;
    }
    case SystemId::henon: {
      HenonMap m;
      m.a = take(rest, "a", m.a);
      m.b = take(rest, "b", m.b);
      model = m;
      break;
    }
    case SystemId::lozi: {
      LoziMap m;
      m.a = take(rest, "a", m.a);
      m.b = take(rest, "b", m.b);
      model = m;
      break;
    }
    case SystemId::lorenz63: {
      Lorenz63Flow m;
      m.sigma = take(rest, "sigma", m.sigma);
      m.rho = take(rest, "rho", m.rho);
      m.beta = take(rest, "beta", m.beta);
      model = m;
      break;
    }
    case SystemId::lorenz84: {
      Lorenz84Flow m;
      m.a = take(rest, "a", m.a);
      m.b = take(rest, "b", m.b);
      m.F = take(rest, "F", m.F);
      m.G = take(rest, "G", m.G);
      model = m;
      break;
    }
  }
  if (!rest.empty()) {
    throw ConfigError(std::string(to_string(id)) + ": unknown parameter '" + rest.begin()->first + "'");
  }
  return SystemSpec(std::move(model));
}

SystemSpec SystemSpec::solenoid(double lambda, double K) {
  return make(SystemId::solenoid, {{"lambda", lambda}, {"K", K}});
}
SystemSpec SystemSpec::henon(double a, double b) { return make(SystemId::henon, {{"a", a}, {"b", b}}); }
SystemSpec SystemSpec::lozi(double a, double b) { return make(SystemId::lozi, {{"a", a}, {"b", b}}); }
SystemSpec SystemSpec::lorenz63(double sigma, double rho, double beta) {
  return make(SystemId::lorenz63, {{"sigma", sigma}, {"rho", rho}, {"beta", beta}});
}
SystemSpec SystemSpec::lorenz84(double a, double b, double F, double G) {
  return make(SystemId::lorenz84, {{"a", a}, {"b", b}, {"F", F}, {"G", G}});
}

SystemKind SystemSpec::kind() const noexcept {
  return std::visit([](const auto& m) { return std::decay_t<decltype(m)>::kind; }, model_);
}

std::size_t SystemSpec::state_dim() const noexcept {
  return std::visit([](const auto& m) { return std::decay_t<decltype(m)>::dim; }, model_);
}

ParamMap SystemSpec::params() const {
  struct Visitor {
    ParamMap operator()(const ThomMap&) const { return {}; }
    ParamMap operator()(const SolenoidMap& m) const { return {{"lambda", m.lambda}, {"K", m.K}}; }
    ParamMap operator()(const HenonMap& m) const { return {{"a", m.a}, {"b", m.b}}; }
    ParamMap operator()(const LoziMap& m) const { return {{"a", m.a}, {"b", m.b}}; }
    ParamMap operator()(const Lorenz63Flow& m) const {
      return {{"sigma", m.sigma}, {"rho", m.rho}, {"beta", m.beta}};
    }
    ParamMap operator()(const Lorenz84Flow& m) const { return {{"a", m.a}, {"b", m.b}, {"F", m.F}, {"G", m.G}}; }
  };
  return std::visit(Visitor{}, model_);
}

double SystemSpec::param(std::string_view name) const {
  const auto p = params();
  auto it = p.find(name);
  if (it == p.end()) throw ConfigError(std::string(this->name()) + " has no parameter '" + std::string(name) + "'");
  return it->second;
}

SystemSpec SystemSpec::with_param(std::string_view name, double value) const {
  auto p = params();
  auto it = p.find(name);
  if (it == p.end()) throw ConfigError(std::string(this->name()) + " has no parameter '" + std::string(name) + "'");
  it->second = value;
  return make(id(), p);
}

double SystemSpec::default_sample_interval() const noexcept {
  switch (id()) {
    case SystemId::lorenz63:
      return Lorenz63Flow::kDefaultSampleInterval;
    case SystemId::lorenz84:
      return Lorenz84Flow::kDefaultSampleInterval;
    default:
      return 1.0;
  }
}

StateVector map_step(const SystemSpec& system, const StateVector& state) {
  if (system.kind() != SystemKind::map) throw ConfigError(std::string(system.name()) + " is a flow, not a map");
  require_state(system, state);
  StateVector s = state;
  std::visit(
      [&](const auto& m) {
        if constexpr (MapModel<std::decay_t<decltype(m)>>) m.step(s);
      },
      system.model());
  return s;
}

StateVector vector_field(const SystemSpec& system, const StateVector& state) {
  if (system.kind() != SystemKind::flow) throw ConfigError(std::string(system.name()) + " is a map, not a flow");
  require_state(system, state);
  double p[3] = {state[0], state[1], state[2]};
  double out[3] = {0.0, 0.0, 0.0};
  std::visit(
      [&](const auto& m) {
        if constexpr (FlowModel<std::decay_t<decltype(m)>>) m.field(p, out);
      },
      system.model());
  return {out[0], out[1], out[2]};
}

StateVector flow_sample(const SystemSpec& system, const StateVector& state, double dt, std::size_t substeps) {
  if (system.kind() != SystemKind::flow) throw ConfigError(std::string(system.name()) + " is a map, not a flow");
  require_state(system, state);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("flow_sample: dt must be positive");
  if (substeps == 0) throw ConfigError("flow_sample: substeps must be positive");
  double p[3] = {state[0], state[1], state[2]};
  const double h = dt / static_cast<double>(substeps);
  std::visit(
      [&](const auto& m) {
        if constexpr (FlowModel<std::decay_t<decltype(m)>>) {
          for (std::size_t k = 0; k < substeps; ++k) {
            rk4_step(m, p, h);
            if (!std::isfinite(p[0]) || !std::isfinite(p[1]) || !std::isfinite(p[2])) {
              throw DivergenceError(std::string(system.name()) + ": non-finite state at RK4 substep " +
                                        std::to_string(k + 1),
                                    k + 1);
            }
          }
        }
      },
      system.model());
  return {p[0], p[1], p[2]};
}

std::optional<SquareMatrix> jacobian(const SystemSpec& system, const StateVector& state) {
  require_state(system, state);
  return std::visit([&](const auto& m) -> std::optional<SquareMatrix> { return m.jacobian(state); },
                    system.model());
}

StateVector to_cartesian(const SystemSpec& system, const StateVector& state) {
  if (system.id() == SystemId::solenoid) return SolenoidMap::to_cartesian(state);
  return state;
}

StateVector initial_state(const SystemSpec& system, const OrbitConfig& cfg) {
  if (cfg.initial) {
    require_state(system, *cfg.initial);
    StateVector s = *cfg.initial;
    if (system.id() == SystemId::solenoid) {
      s[0] = static_cast<double>(SolenoidMap::lattice_index(s[0])) / static_cast<double>(SolenoidMap::kLattice);
    }
    return s;
  }
  Rng rng(cfg.seed);
  switch (system.id()) {
    case SystemId::thom: {
      const double x = rng.uniform(0.0, 1.0);
      return {x, rng.uniform(0.0, 1.0)};
    }
    case SystemId::solenoid: {
      const auto k = static_cast<std::int64_t>(rng.below(SolenoidMap::kLattice));
      return {static_cast<double>(k) / static_cast<double>(SolenoidMap::kLattice), 1.0, 0.0};
    }
    case SystemId::henon:
    case SystemId::lozi: {
      const double x = rng.uniform(-0.1, 0.1);
      return {x, rng.uniform(-0.1, 0.1)};
    }
    case SystemId::lorenz63:
    case SystemId::lorenz84: {
      const double x = 1.0 + rng.uniform(-0.1, 0.1);
      const double y = 1.0 + rng.uniform(-0.1, 0.1);
      return {x, y, 1.0 + rng.uniform(-0.1, 0.1)};
    }
  }
  return {};
}

std::vector<StateVector> orbit(const SystemSpec& system, const OrbitConfig& cfg) {
  std::vector<StateVector> out;
  out.reserve(cfg.n_samples);
  for_each_state(system, cfg, [&](const auto&, const StateVector& s) { out.push_back(s); });
  return out;
}

namespace detail {

void throw_divergence(std::string_view system, std::size_t index) {
  throw DivergenceError(std::string(system) + ": orbit diverged at step " + std::to_string(index), index);
}

void validate_orbit_config(const SystemSpec& system, const OrbitConfig& cfg) {
  if (cfg.n_samples == 0) throw ConfigError("orbit: n_samples must be positive");
  if (system.kind() == SystemKind::flow) {
    if (cfg.sample_interval && !(*cfg.sample_interval > 0.0 && std::isfinite(*cfg.sample_interval))) {
      throw ConfigError("orbit: sample interval must be positive");
    }
    if (cfg.substeps_per_sample == 0) throw ConfigError("orbit: substeps_per_sample must be positive");
  }
}

}  // namespace detail

}  // namespace exdyn
