#include "exdyn/observables.hpp"

#include <cstdio>
#include <numbers>

#include "exdyn/error.hpp"

namespace exdyn {

namespace {

constexpr std::array<std::string_view, 7> kFamilies = {"dist_power",     "power_sum",      "linear", "plane_theta_xy",
                                                       "plane_theta_xz", "plane_theta_2d", "coord_x"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void require_positive(std::string_view what, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be positive and finite");
}

}  // namespace

std::string_view to_string(ObservableFamily f) noexcept { return kFamilies[static_cast<std::size_t>(f)]; }

ObservableFamily observable_family_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kFamilies.size(); ++i) {
    if (kFamilies[i] == name) return static_cast<ObservableFamily>(i);
  }
  throw ConfigError("unknown observable family '" + std::string(name) + "'");
}

std::string_view to_string(SignForm s) noexcept { return s == SignForm::one_minus ? "one_minus" : "negative"; }

SignForm sign_form_from_string(std::string_view name) {
  if (name == "one_minus") return SignForm::one_minus;
  if (name == "negative") return SignForm::negative;
  throw ConfigError("unknown sign_form '" + std::string(name) + "'");
}

ObservableSpec ObservableSpec::dist_power(const StateVector& center, double alpha, SignForm sign) {
  ObservableSpec s;
  s.family = ObservableFamily::dist_power;
  s.center = center;
  s.alpha = alpha;
  s.sign_form = sign;
  return s;
}

ObservableSpec ObservableSpec::power_sum(const StateVector& center, double a, double b) {
  ObservableSpec s;
  s.family = ObservableFamily::power_sum;
  s.center = center;
  s.a = a;
  s.b = b;
  return s;
}

ObservableSpec ObservableSpec::linear(double a, double b, double c, double d) {
  ObservableSpec s;
  s.family = ObservableFamily::linear;
  s.coefficients = {a, b, c, d};
  return s;
}

ObservableSpec ObservableSpec::plane_theta_xy(double theta, double x0, double y0) {
  ObservableSpec s;
  s.family = ObservableFamily::plane_theta_xy;
  s.theta = theta;
  s.offset = {x0, y0, 0.0};
  return s;
}

ObservableSpec ObservableSpec::plane_theta_xz(double theta, double x0, double z0) {
  ObservableSpec s;
  s.family = ObservableFamily::plane_theta_xz;
  s.theta = theta;
  s.offset = {x0, 0.0, z0};
  return s;
}

ObservableSpec ObservableSpec::plane_theta_2d(double theta) {
  ObservableSpec s;
  s.family = ObservableFamily::plane_theta_2d;
  s.theta = theta;
  return s;
}

ObservableSpec ObservableSpec::coord_x() {
  ObservableSpec s;
  s.family = ObservableFamily::coord_x;
  return s;
}

void ObservableSpec::validate() const {
  switch (family) {
    case ObservableFamily::dist_power:
      if (!center) throw ConfigError("dist_power: center p_M is required");
      if (!center->finite()) throw ConfigError("dist_power: center must be finite");
      require_positive("dist_power: alpha", alpha);
      break;
    case ObservableFamily::power_sum:
      if (!center) throw ConfigError("power_sum: center p_M is required");
      if (center->dim() != 2) throw ConfigError("power_sum: center must be 2-dimensional");
      if (!center->finite()) throw ConfigError("power_sum: center must be finite");
      require_positive("power_sum: a", a);
      require_positive("power_sum: b", b);
      break;
    case ObservableFamily::linear:
      for (double c : coefficients) {
        if (!std::isfinite(c)) throw ConfigError("linear: coefficients must be finite");
      }
      if (coefficients[0] == 0.0 && coefficients[1] == 0.0 && coefficients[2] == 0.0) {
        throw ConfigError("linear: a = b = c = 0 gives a constant observable");
      }
      break;
    case ObservableFamily::plane_theta_xy:
    case ObservableFamily::plane_theta_xz:
    case ObservableFamily::plane_theta_2d:
      if (!(theta >= 0.0 && theta <= 1.0)) throw ConfigError(std::string(to_string(family)) + ": theta must lie in [0, 1]");
      for (double o : offset) {
        if (!std::isfinite(o)) throw ConfigError(std::string(to_string(family)) + ": offsets must be finite");
      }
      break;
    case ObservableFamily::coord_x:
      break;
  }
}

void ObservableSpec::check_dim(std::size_t dim) const {
  auto fail = [&](std::string_view need) {
    throw ConfigError(std::string(to_string(family)) + ": needs " + std::string(need) + " states, got dimension " +
                      std::to_string(dim));
  };
  switch (family) {
    case ObservableFamily::dist_power:
      if (center && center->dim() != dim) {
        throw ConfigError("dist_power: center has dimension " + std::to_string(center->dim()) +
                          " but states have dimension " + std::to_string(dim));
      }
      break;
    case ObservableFamily::power_sum:
    case ObservableFamily::plane_theta_2d:
      if (dim != 2) fail("2-dimensional");
      break;
    case ObservableFamily::plane_theta_xz:
      if (dim != 3) fail("3-dimensional");
      break;
    case ObservableFamily::linear:
      if (dim == 2 && coefficients[2] != 0.0) fail("3-dimensional");
      break;
    default:
      break;
  }
}

std::string ObservableSpec::describe() const {
  std::string out(to_string(family));
  switch (family) {
    case ObservableFamily::dist_power:
      out += "(alpha=" + num(alpha) + ",center=" + (center ? center->to_string() : "?") + "," +
             std::string(to_string(sign_form)) + ")";
      break;
    case ObservableFamily::power_sum:
      out += "(a=" + num(a) + ",b=" + num(b) + ",center=" + (center ? center->to_string() : "?") + ")";
      break;
    case ObservableFamily::linear:
      out += "(" + num(coefficients[0]) + "," + num(coefficients[1]) + "," + num(coefficients[2]) + "," +
             num(coefficients[3]) + ")";
      break;
    case ObservableFamily::plane_theta_xy:
    case ObservableFamily::plane_theta_xz:
      out += "(theta=" + num(theta) + ",offset=(" + num(offset[0]) + "," + num(offset[1]) + "," + num(offset[2]) + "))";
      break;
    case ObservableFamily::plane_theta_2d:
      out += "(theta=" + num(theta) + ")";
      break;
    case ObservableFamily::coord_x:
      break;
  }
  return out;
}

Observable::Observable(const ObservableSpec& spec) : spec_(spec) {
  spec_.validate();
  const double turn = 2.0 * std::numbers::pi * spec_.theta;
  const double c = std::cos(turn);
  const double s = std::sin(turn);
  const auto& o = spec_.offset;
  switch (spec_.family) {
    case ObservableFamily::dist_power:
      kernel_ = Kernel::distance;
      dim_ = spec_.center->dim();
      for (std::size_t i = 0; i < dim_; ++i) w_[i] = (*spec_.center)[i];
      bias_ = spec_.sign_form == SignForm::one_minus ? 1.0 : 0.0;
      break;
    case ObservableFamily::power_sum:
      kernel_ = Kernel::power_sum;
      w_ = {(*spec_.center)[0], (*spec_.center)[1], 0.0, 0.0};
      break;
    case ObservableFamily::linear:
      w_ = spec_.coefficients;
      break;
    case ObservableFamily::plane_theta_xy:
      w_ = {c, s, 0.0, -(c * o[0] + s * o[1])};
      break;
    case ObservableFamily::plane_theta_xz:
      w_ = {c, 0.0, s, -(c * o[0] + s * o[2])};
      break;
    case ObservableFamily::plane_theta_2d:
      w_ = {c, s, 0.0, 0.0};
      break;
    case ObservableFamily::coord_x:
      w_ = {1.0, 0.0, 0.0, 0.0};
      break;
  }
}

double eval(const ObservableSpec& obs, const StateVector& p) {
  obs.validate();
  obs.check_dim(p.dim());
  return Observable(obs)(p);
}

ScalarSeries series(const SystemSpec& system, const ObservableSpec& obs, const OrbitConfig& cfg) {
  const Observable phi(obs);
  obs.check_dim(system.id() == SystemId::solenoid ? 3 : system.state_dim());
  ScalarSeries out;
  out.meta.system = std::string(system.name());
  out.meta.observable = obs.describe();
  out.meta.seed = cfg.seed;
  if (system.kind() == SystemKind::flow) {
    out.meta.sample_interval = cfg.sample_interval.value_or(system.default_sample_interval());
  }
  out.values.reserve(cfg.n_samples);
  for_each_state(system, cfg, [&](const auto& model, const StateVector& s) {
    out.values.push_back(phi(detail::cartesian(model, s)));
  });
  return out;
}

}  // namespace exdyn
