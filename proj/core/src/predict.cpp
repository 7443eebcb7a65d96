#include <algorithm>
#include <cmath>
#include <functional>

#include "exdyn/analysis.hpp"
#include "exdyn/error.hpp"

namespace exdyn {

namespace {

bool in_unit(double v) noexcept { return v >= 0.0 && v <= 1.0; }

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be positive");
}

bool is_x_projection(const ObservableSpec& obs) {
  if (obs.family == ObservableFamily::coord_x) return true;
  return obs.family == ObservableFamily::linear && obs.coefficients[0] > 0.0 && obs.coefficients[1] == 0.0 &&
         obs.coefficients[2] == 0.0;
}

}  // namespace

TailPrediction make_prediction(double neg_inv_xi, std::string source, ParamMap inputs) {
  if (!(neg_inv_xi > 0.0) || !std::isfinite(neg_inv_xi)) {
    throw ConfigError("prediction: -1/xi must be positive, got " + std::to_string(neg_inv_xi));
  }
  return {neg_inv_xi, -1.0 / neg_inv_xi, std::move(source), std::move(inputs)};
}

TailPrediction predict_thom_alpha(const StateVector& p_M, double alpha) {
  require_positive(alpha, "alpha");
  if (p_M.dim() != 2) throw ConfigError("predict_thom_alpha: p_M must be planar");
  const int inside = static_cast<int>(in_unit(p_M[0])) + static_cast<int>(in_unit(p_M[1]));
  ParamMap in{{"alpha", alpha}, {"x_M", p_M[0]}, {"y_M", p_M[1]}};
  switch (inside) {
    case 2:
      return make_prediction(2.0 / alpha, "thom_alpha_inside", std::move(in));
    case 1:
      return make_prediction(1.5, "thom_alpha_outside_one", std::move(in));
    default:
      return make_prediction(2.0, "thom_alpha_outside_both", std::move(in));
  }
}

TailPrediction predict_thom_ab(double a, double b) {
  require_positive(a, "a");
  require_positive(b, "b");
  return make_prediction(1.0 / a + 1.0 / b, "thom_ab", {{"a", a}, {"b", b}});
}

TailPrediction predict_solenoid(SolenoidObservable kind, double lambda, double alpha) {
  const double dim = solenoid_hausdorff_dim(lambda);
  if (kind == SolenoidObservable::planar) {
    return make_prediction(dim - 0.5, "solenoid_planar", {{"lambda", lambda}, {"dim", dim}});
  }
  require_positive(alpha, "alpha");
  return make_prediction(dim / alpha, "solenoid_dist_power", {{"lambda", lambda}, {"alpha", alpha}, {"dim", dim}});
}

TailPrediction predict_general(double d_u, double d_s) {
  require_positive(d_u, "d_u");
  if (!(d_s >= 0.0) || !std::isfinite(d_s)) throw ConfigError("d_s must be nonnegative");
  return make_prediction(d_u / 2.0 + d_s, "general", {{"d_u", d_u}, {"d_s", d_s}});
}

TailPrediction predict_dist_power_on_attractor(double dim, double alpha) {
  require_positive(dim, "dim");
  require_positive(alpha, "alpha");
  return make_prediction(dim / alpha, "dist_power_on_attractor", {{"dim", dim}, {"alpha", alpha}});
}

TailPrediction predict_lorenz63_planar(double beta, double d_tilde_s) {
  require_positive(beta, "beta");
  if (!(d_tilde_s >= 0.0) || !std::isfinite(d_tilde_s)) throw ConfigError("d_tilde_s must be nonnegative");
  return make_prediction(1.0 / beta + 0.5 + d_tilde_s, "lorenz63_planar", {{"beta", beta}, {"d_tilde_s", d_tilde_s}});
}

std::array<double, 3> lorenz63_origin_eigenvalues(double sigma, double rho, double beta) {
  // The Jacobian at the origin splits into the (x, y) block and -beta.
  const double tr = -(sigma + 1.0);
  const double det = sigma * (1.0 - rho);
  const double disc = tr * tr - 4.0 * det;
  if (disc < 0.0) throw ConfigError("lorenz63: complex eigenvalues at the origin");
  const double root = std::sqrt(disc);
  std::array<double, 3> ev{(tr + root) / 2.0, (tr - root) / 2.0, -beta};
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

double lorenz63_beta(double sigma, double rho, double beta) {
  const auto ev = lorenz63_origin_eigenvalues(sigma, rho, beta);
  if (!(ev[0] > 0.0)) throw ConfigError("lorenz63: origin has no unstable direction");
  return std::abs(ev[1]) / ev[0];
}

double prediction_dimension(const SystemSpec& system, const PredictionRequest& request) {
  if (request.dimension) return *request.dimension;
  if (system.id() == SystemId::solenoid) return solenoid_hausdorff_dim(system.param("lambda"));
  std::size_t steps = request.lyapunov_steps;
  if (steps == 0) steps = system.kind() == SystemKind::map ? 1000000 : 200000;
  return lyapunov_dimension(lyapunov_spectrum(system, steps, request.lyapunov_transient, request.seed));
}

std::optional<TailPrediction> predict_for(const SystemSpec& system, const ObservableSpec& obs,
                                          const PredictionRequest& request) {
  obs.validate();
  const bool distance = obs.family == ObservableFamily::dist_power;
  const bool power_sum = obs.family == ObservableFamily::power_sum;
  auto dim = [&] { return prediction_dimension(system, request); };

  switch (system.id()) {
    case SystemId::thom:
      if (distance) {
        if (!obs.center) throw ConfigError("predict: distance observable needs a resolved centre");
        return predict_thom_alpha(*obs.center, obs.alpha);
      }
      if (power_sum) return predict_thom_ab(obs.a, obs.b);
      return std::nullopt;
    case SystemId::solenoid: {
      const double lambda = system.param("lambda");
      if (distance) return predict_solenoid(SolenoidObservable::dist_power_on_attractor, lambda, obs.alpha);
      if (power_sum) return std::nullopt;
      return predict_solenoid(SolenoidObservable::planar, lambda);
    }
    case SystemId::henon:
      if (distance) return predict_dist_power_on_attractor(dim(), obs.alpha);
      if (power_sum) return std::nullopt;
      return predict_general(1.0, std::max(0.0, dim() - 1.0));
    case SystemId::lozi:
      if (distance) return predict_dist_power_on_attractor(dim(), obs.alpha);
      return std::nullopt;
    case SystemId::lorenz63:
      if (distance) return predict_dist_power_on_attractor(dim(), obs.alpha);
      if (is_x_projection(obs)) {
        const auto p = system.params();
        const bool classical = system == SystemSpec::lorenz63();
        const double beta = classical ? kLorenz63Beta : lorenz63_beta(p.at("sigma"), p.at("rho"), p.at("beta"));
        return predict_lorenz63_planar(beta, request.d_tilde_s);
      }
      return std::nullopt;
    case SystemId::lorenz84:
      if (distance) return predict_dist_power_on_attractor(dim(), obs.alpha);
      if (power_sum) return std::nullopt;
      return predict_general(2.0, std::max(0.0, dim() - 2.0));
  }
  return std::nullopt;
}

}  // namespace exdyn
