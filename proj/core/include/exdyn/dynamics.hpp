#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "exdyn/error.hpp"
#include "exdyn/state.hpp"

namespace exdyn {

enum class SystemId { thom, solenoid, henon, lozi, lorenz63, lorenz84 };
enum class SystemKind { map, flow };

using ParamMap = std::map<std::string, double, std::less<>>;

std::string_view to_string(SystemId id) noexcept;
SystemId system_id_from_string(std::string_view name);

namespace detail {

// x mod 1 into [0, 1); exact integers go to 0.
inline double mod1(double v) noexcept {
  double r = v - std::floor(v);
  return r >= 1.0 ? 0.0 : r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Models. Each exposes `kind`, `dim`, and either `step` (maps) or `field`
// (flows), plus an analytic `jacobian`.

// Thom's map (Arnold's cat map) on [0,1)^2.
struct ThomMap {
  static constexpr SystemKind kind = SystemKind::map;
  static constexpr std::size_t dim = 2;

  void step(StateVector& s) const noexcept {
    const double x = s[0];
    const double y = s[1];
    s[0] = detail::mod1(2.0 * x + y);
    s[1] = detail::mod1(x + y);
  }

  SquareMatrix jacobian(const StateVector&) const noexcept {
    SquareMatrix j;
    j.n = 2;
    j(0, 0) = 2.0;
    j(0, 1) = 1.0;
    j(1, 0) = 1.0;
    j(1, 1) = 1.0;
    return j;
  }
};

// Embedded solenoid map in (psi, r, z) coordinates, psi measured in
// revolutions.
//
// The angular coordinate is the doubling map, which collapses to 0 within ~53
// steps in binary floating point. psi is therefore kept on the lattice
// {k / P}, P a safe prime with 2 as a primitive root, and doubled exactly in
// integer arithmetic; the angular orbit has period P - 1 (about 1.1e15).
struct SolenoidMap {
  static constexpr SystemKind kind = SystemKind::map;
  static constexpr std::size_t dim = 3;
  static constexpr std::int64_t kLattice = 1125899906840747;  // 2q+1, q prime, = 3 mod 8

  double lambda = 0.25;
  double K = 0.5;

  static std::int64_t lattice_index(double psi) noexcept {
    auto k = static_cast<std::int64_t>(std::llround(detail::mod1(psi) * static_cast<double>(kLattice)));
    return k >= kLattice ? k - kLattice : k;
  }

  void step(StateVector& s) const noexcept {
    const double turn = 2.0 * std::numbers::pi * s[0];
    const double c = std::cos(turn);
    const double sn = std::sin(turn);
    std::int64_t k = 2 * lattice_index(s[0]);
    if (k >= kLattice) k -= kLattice;
    s[0] = static_cast<double>(k) / static_cast<double>(kLattice);
    s[1] = 1.0 + K * c + lambda * (s[1] - 1.0);
    s[2] = K * sn + lambda * s[2];
  }

  SquareMatrix jacobian(const StateVector& s) const noexcept {
    const double turn = 2.0 * std::numbers::pi * s[0];
    const double w = 2.0 * std::numbers::pi * K;
    SquareMatrix j;
    j.n = 3;
    j(0, 0) = 2.0;
    j(1, 0) = -w * std::sin(turn);
    j(1, 1) = lambda;
    j(2, 0) = w * std::cos(turn);
    j(2, 2) = lambda;
    return j;
  }

  static StateVector to_cartesian(const StateVector& s) noexcept {
    const double turn = 2.0 * std::numbers::pi * s[0];
    return {s[1] * std::cos(turn), s[1] * std::sin(turn), s[2]};
  }
};

struct HenonMap {
  static constexpr SystemKind kind = SystemKind::map;
  static constexpr std::size_t dim = 2;

  double a = 1.4;
  double b = 0.3;

  void step(StateVector& s) const noexcept {
    const double x = s[0];
    s[0] = 1.0 - a * x * x + s[1];
    s[1] = b * x;
  }

  SquareMatrix jacobian(const StateVector& s) const noexcept {
    SquareMatrix j;
    j.n = 2;
    j(0, 0) = -2.0 * a * s[0];
    j(0, 1) = 1.0;
    j(1, 0) = b;
    return j;
  }
};

struct LoziMap {
  static constexpr SystemKind kind = SystemKind::map;
  static constexpr std::size_t dim = 2;

  double a = 1.7;
  double b = 0.1;

  void step(StateVector& s) const noexcept {
    const double x = s[0];
    s[0] = 1.0 - a * std::abs(x) + s[1];
    s[1] = b * x;
  }

  // Not differentiable on the kink line x = 0.
  std::optional<SquareMatrix> jacobian(const StateVector& s) const noexcept {
    if (s[0] == 0.0) return std::nullopt;
    SquareMatrix j;
    j.n = 2;
    j(0, 0) = s[0] > 0.0 ? -a : a;
    j(0, 1) = 1.0;
    j(1, 0) = b;
    return j;
  }
};

struct Lorenz63Flow {
  static constexpr SystemKind kind = SystemKind::flow;
  static constexpr std::size_t dim = 3;
  static constexpr double kDefaultSampleInterval = 0.05;

  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;

  void field(const double* p, double* out) const noexcept {
    out[0] = sigma * (p[1] - p[0]);
    out[1] = p[0] * (rho - p[2]) - p[1];
    out[2] = p[0] * p[1] - beta * p[2];
  }

  SquareMatrix jacobian(const StateVector& s) const noexcept {
    SquareMatrix j;
    j.n = 3;
    j(0, 0) = -sigma;
    j(0, 1) = sigma;
    j(1, 0) = rho - s[2];
    j(1, 1) = -1.0;
    j(1, 2) = -s[0];
    j(2, 0) = s[1];
    j(2, 1) = s[0];
    j(2, 2) = -beta;
    return j;
  }
};

struct Lorenz84Flow {
  static constexpr SystemKind kind = SystemKind::flow;
  static constexpr std::size_t dim = 3;
  static constexpr double kDefaultSampleInterval = 0.1;

  double a = 0.25;
  double b = 4.0;
  double F = 8.0;
  double G = 1.0;

  void field(const double* p, double* out) const noexcept {
    const double x = p[0], y = p[1], z = p[2];
    out[0] = -a * x - y * y - z * z + a * F;
    out[1] = -y + x * y - b * x * z + G;
    out[2] = -z + b * x * y + x * z;
  }

  SquareMatrix jacobian(const StateVector& s) const noexcept {
    const double x = s[0], y = s[1], z = s[2];
    SquareMatrix j;
    j.n = 3;
    j(0, 0) = -a;
    j(0, 1) = -2.0 * y;
    j(0, 2) = -2.0 * z;
    j(1, 0) = y - b * z;
    j(1, 1) = x - 1.0;
    j(1, 2) = -b * x;
    j(2, 0) = b * y + z;
    j(2, 1) = b * x;
    j(2, 2) = x - 1.0;
    return j;
  }
};

template <class M>
concept MapModel = (M::kind == SystemKind::map);
template <class M>
concept FlowModel = (M::kind == SystemKind::flow);

// One classical RK4 step of size h, in place.
template <FlowModel M>
inline void rk4_step(const M& model, double* p, double h) noexcept {
  double k1[3], k2[3], k3[3], k4[3], w[3];
  model.field(p, k1);
  for (int i = 0; i < 3; ++i) w[i] = p[i] + 0.5 * h * k1[i];
  model.field(w, k2);
  for (int i = 0; i < 3; ++i) w[i] = p[i] + 0.5 * h * k2[i];
  model.field(w, k3);
  for (int i = 0; i < 3; ++i) w[i] = p[i] + h * k3[i];
  model.field(w, k4);
  for (int i = 0; i < 3; ++i) p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

// ---------------------------------------------------------------------------

// A named dynamical system with validated parameters.
class SystemSpec {
 public:
  using Model = std::variant<ThomMap, SolenoidMap, HenonMap, LoziMap, Lorenz63Flow, Lorenz84Flow>;

  // Builds a system with the given parameters; missing ones take defaults.
  // Throws ConfigError on unknown names or inadmissible values.
  static SystemSpec make(SystemId id, const ParamMap& params = {});
  static SystemSpec make(std::string_view name, const ParamMap& params = {});

  static SystemSpec thom() { return make(SystemId::thom); }
  static SystemSpec solenoid(double lambda = 0.25, double K = 0.5);
  static SystemSpec henon(double a = 1.4, double b = 0.3);
  static SystemSpec lozi(double a = 1.7, double b = 0.1);
  static SystemSpec lorenz63(double sigma = 10.0, double rho = 28.0, double beta = 8.0 / 3.0);
  static SystemSpec lorenz84(double a = 0.25, double b = 4.0, double F = 8.0, double G = 1.0);

  SystemId id() const noexcept { return static_cast<SystemId>(model_.index()); }
  std::string_view name() const noexcept { return to_string(id()); }
  SystemKind kind() const noexcept;
  std::size_t state_dim() const noexcept;
  ParamMap params() const;
  // Throws ConfigError for a parameter the system does not have.
  double param(std::string_view name) const;
  SystemSpec with_param(std::string_view name, double value) const;

  // Sampling interval used when an OrbitConfig leaves it unset (flows only).
  double default_sample_interval() const noexcept;

  const Model& model() const noexcept { return model_; }

  friend bool operator==(const SystemSpec& a, const SystemSpec& b) { return a.params() == b.params() && a.id() == b.id(); }

 private:
  explicit SystemSpec(Model m) : model_(std::move(m)) {}
  Model model_;
};

struct OrbitConfig {
  // nullopt draws a seeded random point from a system-specific box.
  std::optional<StateVector> initial;
  std::size_t transient = 100000;
  std::size_t n_samples = 1;
  // Flows only; nullopt uses SystemSpec::default_sample_interval().
  std::optional<double> sample_interval;
  std::size_t substeps_per_sample = 10;
  std::uint64_t seed = 0;
};

// One application of a map. Throws ConfigError for flows, bad dimension or
// non-finite input.
StateVector map_step(const SystemSpec& system, const StateVector& state);

// Time derivative of a flow at `state`.
StateVector vector_field(const SystemSpec& system, const StateVector& state);

// Advances a flow by dt using `substeps` RK4 steps of size dt / substeps.
// Throws DivergenceError (index = substep reached) on a non-finite state.
StateVector flow_sample(const SystemSpec& system, const StateVector& state, double dt, std::size_t substeps);

// Analytic Jacobian of map_step (maps) or vector_field (flows). Returns
// nullopt at a non-differentiable point (Lozi kink x = 0).
std::optional<SquareMatrix> jacobian(const SystemSpec& system, const StateVector& state);

// Cartesian embedding; identity except for the solenoid.
StateVector to_cartesian(const SystemSpec& system, const StateVector& state);

// Initial state for an orbit: cfg.initial if set (validated), otherwise a
// point drawn from `cfg.seed`.
StateVector initial_state(const SystemSpec& system, const OrbitConfig& cfg);

// Materialized orbit: cfg.n_samples states after cfg.transient discarded steps.
std::vector<StateVector> orbit(const SystemSpec& system, const OrbitConfig& cfg);

namespace detail {

template <class M>
inline StateVector cartesian(const M&, const StateVector& s) noexcept {
  if constexpr (std::is_same_v<M, SolenoidMap>) {
    return SolenoidMap::to_cartesian(s);
  } else {
    return s;
  }
}

[[noreturn]] void throw_divergence(std::string_view system, std::size_t index);

template <class M>
struct Stepper;

template <MapModel M>
struct Stepper<M> {
  const M& model;
  void operator()(StateVector& s) const noexcept { model.step(s); }
};

template <FlowModel M>
struct Stepper<M> {
  const M& model;
  double h;
  std::size_t substeps;
  void operator()(StateVector& s) const noexcept {
    double p[3] = {s[0], s[1], s[2]};
    for (std::size_t k = 0; k < substeps; ++k) rk4_step(model, p, h);
    s[0] = p[0];
    s[1] = p[1];
    s[2] = p[2];
  }
};

template <class M>
Stepper<M> make_stepper(const M& model, const SystemSpec& spec, const OrbitConfig& cfg) {
  if constexpr (M::kind == SystemKind::map) {
    (void)spec;
    (void)cfg;
    return Stepper<M>{model};
  } else {
    const double dt = cfg.sample_interval.value_or(spec.default_sample_interval());
    return Stepper<M>{model, dt / static_cast<double>(cfg.substeps_per_sample), cfg.substeps_per_sample};
  }
}

void validate_orbit_config(const SystemSpec& system, const OrbitConfig& cfg);

}  // namespace detail

// Streams the orbit: discards cfg.transient steps, then calls
// `fn(model, state)` for each of the cfg.n_samples states, with the concrete
// model type so callers can specialise (e.g. Cartesian conversion) without
// dispatch in the loop. States are in internal coordinates.
template <class Fn>
void for_each_state(const SystemSpec& system, const OrbitConfig& cfg, Fn&& fn) {
  detail::validate_orbit_config(system, cfg);
  StateVector s = initial_state(system, cfg);
  std::visit(
      [&](const auto& model) {
        const auto step = detail::make_stepper(model, system, cfg);
        std::size_t index = 0;
        for (std::size_t i = 0; i < cfg.transient; ++i) {
          step(s);
          ++index;
          if (!s.finite()) detail::throw_divergence(system.name(), index);
        }
        for (std::size_t i = 0; i < cfg.n_samples; ++i) {
          if (i > 0) {
            step(s);
            ++index;
            if (!s.finite()) detail::throw_divergence(system.name(), index);
          }
          fn(model, static_cast<const StateVector&>(s));
        }
      },
      system.model());
}

}  // namespace exdyn
