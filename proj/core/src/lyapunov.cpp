#include <algorithm>
#include <cmath>
#include <functional>

#include "exdyn/analysis.hpp"
#include "exdyn/error.hpp"

namespace exdyn {

namespace {

// Columns of a row-major stride-3 matrix are the tangent vectors.
using Frame = std::array<double, 9>;

Frame identity(std::size_t n) {
  Frame q{};
  for (std::size_t i = 0; i < n; ++i) q[i * 3 + i] = 1.0;
  return q;
}

// w = J q, column by column.
Frame multiply(const SquareMatrix& j, const Frame& q, std::size_t n) {
  Frame w{};
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += j(r, k) * q[k * 3 + c];
      w[r * 3 + c] = acc;
    }
  }
  return w;
}

// Modified Gram-Schmidt in place; adds log |R_kk| to sums.
void reorthonormalise(Frame& q, std::size_t n, std::vector<double>& sums) {
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t p = 0; p < c; ++p) {
      double dot = 0.0;
      for (std::size_t r = 0; r < n; ++r) dot += q[r * 3 + c] * q[r * 3 + p];
      for (std::size_t r = 0; r < n; ++r) q[r * 3 + c] -= dot * q[r * 3 + p];
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) norm += q[r * 3 + c] * q[r * 3 + c];
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalError("lyapunov", "tangent frame degenerated");
    sums[c] += std::log(norm);
    for (std::size_t r = 0; r < n; ++r) q[r * 3 + c] /= norm;
  }
}

template <class M>
SquareMatrix jacobian_at(const M& model, const StateVector& s, bool& kink) {
  if constexpr (std::is_same_v<M, LoziMap>) {
    auto j = model.jacobian(s);
    kink = !j.has_value();
    return j.value_or(SquareMatrix{});
  } else {
    kink = false;
    return model.jacobian(s);
  }
}

// One RK4 step of the state together with the tangent frame dQ/dt = J(x) Q.
template <FlowModel M>
void rk4_variational(const M& model, double* x, Frame& q, double h) {
  constexpr std::size_t n = 3;
  struct Deriv {
    double dx[3];
    Frame dq;
  };
  auto eval = [&](const double* xs, const Frame& qs) {
    Deriv d;
    model.field(xs, d.dx);
    const SquareMatrix j = model.jacobian(StateVector(xs[0], xs[1], xs[2]));
    d.dq = multiply(j, qs, n);
    return d;
  };
  auto shifted = [&](const Deriv& d, double f, double* xs, Frame& qs) {
    for (std::size_t i = 0; i < n; ++i) xs[i] = x[i] + f * d.dx[i];
    for (std::size_t i = 0; i < 9; ++i) qs[i] = q[i] + f * d.dq[i];
  };
  double xs[3];
  Frame qs{};
  const Deriv k1 = eval(x, q);
  shifted(k1, 0.5 * h, xs, qs);
  const Deriv k2 = eval(xs, qs);
  shifted(k2, 0.5 * h, xs, qs);
  const Deriv k3 = eval(xs, qs);
  shifted(k3, h, xs, qs);
  const Deriv k4 = eval(xs, qs);
  for (std::size_t i = 0; i < n; ++i) x[i] += h / 6.0 * (k1.dx[i] + 2.0 * k2.dx[i] + 2.0 * k3.dx[i] + k4.dx[i]);
  for (std::size_t i = 0; i < 9; ++i) q[i] += h / 6.0 * (k1.dq[i] + 2.0 * k2.dq[i] + 2.0 * k3.dq[i] + k4.dq[i]);
}

}  // namespace

LyapunovSpectrum lyapunov_spectrum(const SystemSpec& system, std::size_t n_steps, std::size_t transient,
                                   std::uint64_t seed) {
  if (n_steps < 1000) throw ConfigError("lyapunov_spectrum: n_steps must be at least 1000");
  OrbitConfig cfg;
  cfg.seed = seed;
  cfg.transient = transient;
  const std::size_t n = system.state_dim();
  StateVector s = initial_state(system, cfg);

  LyapunovSpectrum out;
  out.n_steps = n_steps;
  std::vector<double> sums(n, 0.0);
  Frame q = identity(n);

  std::visit(
      [&](const auto& model) {
        using M = std::decay_t<decltype(model)>;
        const auto step = detail::make_stepper(model, system, cfg);
        for (std::size_t i = 0; i < transient; ++i) {
          step(s);
          if (!s.finite()) detail::throw_divergence(system.name(), i + 1);
        }
        if constexpr (MapModel<M>) {
          for (std::size_t i = 0; i < n_steps; ++i) {
            bool kink = false;
            const SquareMatrix j = jacobian_at(model, s, kink);
            step(s);
            if (!s.finite()) detail::throw_divergence(system.name(), transient + i + 1);
            if (kink) {
              ++out.kinks_skipped;
              continue;
            }
            q = multiply(j, q, n);
            reorthonormalise(q, n, sums);
          }
          out.total_time = static_cast<double>(n_steps - out.kinks_skipped);
        } else {
          const double dt = system.default_sample_interval();
          const double h = dt / static_cast<double>(cfg.substeps_per_sample);
          double x[3] = {s[0], s[1], s[2]};
          for (std::size_t i = 0; i < n_steps; ++i) {
            for (std::size_t k = 0; k < cfg.substeps_per_sample; ++k) rk4_variational(model, x, q, h);
            if (!std::isfinite(x[0]) || !std::isfinite(x[1]) || !std::isfinite(x[2])) {
              detail::throw_divergence(system.name(), transient + i + 1);
            }
            reorthonormalise(q, n, sums);
          }
          out.total_time = dt * static_cast<double>(n_steps);
        }
      },
      system.model());

  if (!(out.total_time > 0.0)) throw NumericalError("lyapunov", "no usable tangent steps");
  out.exponents.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.exponents[i] = sums[i] / out.total_time;
  std::sort(out.exponents.begin(), out.exponents.end(), std::greater<>());
  return out;
}

double lyapunov_dimension(const std::vector<double>& exponents) {
  std::vector<double> chi = exponents;
  std::sort(chi.begin(), chi.end(), std::greater<>());
  if (chi.empty() || chi[0] < 0.0) return 0.0;
  constexpr double kTol = 1e-12;
  double partial = 0.0;
  for (std::size_t k = 0; k < chi.size(); ++k) {
    const double next = partial + chi[k];
    if (next < -kTol) return static_cast<double>(k) + partial / -chi[k];
    partial = next;
  }
  return static_cast<double>(chi.size());
}

double lyapunov_dimension(const LyapunovSpectrum& spectrum) { return lyapunov_dimension(spectrum.exponents); }

double solenoid_hausdorff_dim(double lambda) {
  if (!(lambda > 0.0 && lambda < 0.5)) throw ConfigError("solenoid_hausdorff_dim: lambda must lie in (0, 1/2)");
  return 1.0 + std::log(2.0) / std::log(1.0 / lambda);
}

}  // namespace exdyn
