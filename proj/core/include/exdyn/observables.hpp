#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exdyn/dynamics.hpp"
#include "exdyn/state.hpp"

namespace exdyn {

enum class ObservableFamily {
  dist_power,      // 1 - |p - p_M|^alpha, or -|p - p_M|^alpha
  power_sum,       // 1 - |x - x_M|^a - |y - y_M|^b
  linear,          // a x + b y + c z + d
  plane_theta_xy,  // cos(2 pi theta)(x - x0) + sin(2 pi theta)(y - y0)
  plane_theta_xz,  // cos(2 pi theta)(x - x0) + sin(2 pi theta)(z - z0)
  plane_theta_2d,  // x cos(2 pi theta) + y sin(2 pi theta)
  coord_x,         // x
};

enum class SignForm { one_minus, negative };

std::string_view to_string(ObservableFamily f) noexcept;
ObservableFamily observable_family_from_string(std::string_view name);
std::string_view to_string(SignForm s) noexcept;
SignForm sign_form_from_string(std::string_view name);

// A scalar observable on phase space. Only the fields relevant to `family`
// are read; use the named constructors.
struct ObservableSpec {
  ObservableFamily family = ObservableFamily::coord_x;
  std::optional<StateVector> center;
  double alpha = 1.0;
  double a = 1.0;
  double b = 1.0;
  std::array<double, 4> coefficients{1.0, 0.0, 0.0, 0.0};
  double theta = 0.0;  // revolutions
  std::array<double, 3> offset{0.0, 0.0, 0.0};
  SignForm sign_form = SignForm::one_minus;

  static ObservableSpec dist_power(const StateVector& center, double alpha, SignForm sign = SignForm::one_minus);
  static ObservableSpec power_sum(const StateVector& center, double a, double b);
  static ObservableSpec linear(double a, double b, double c, double d);
  static ObservableSpec plane_theta_xy(double theta, double x0 = 0.0, double y0 = 0.0);
  static ObservableSpec plane_theta_xz(double theta, double x0 = 0.0, double z0 = 0.0);
  static ObservableSpec plane_theta_2d(double theta);
  static ObservableSpec coord_x();
  // phi(x, y, z) = x written as the linear family.
  static ObservableSpec flat_x() { return linear(1.0, 0.0, 0.0, 0.0); }

  bool uses_center() const noexcept {
    return family == ObservableFamily::dist_power || family == ObservableFamily::power_sum;
  }
  bool is_planar() const noexcept { return !uses_center(); }

  // Throws ConfigError when an invariant is violated.
  void validate() const;
  // Throws ConfigError unless states of dimension `dim` can be evaluated.
  void check_dim(std::size_t dim) const;

  std::string describe() const;
};

// Evaluation kernel built once from a validated spec. Planar families all
// reduce to one affine form.
class Observable {
 public:
  explicit Observable(const ObservableSpec& spec);

  const ObservableSpec& spec() const noexcept { return spec_; }

  // No dimension check; see ObservableSpec::check_dim.
  double operator()(const StateVector& p) const noexcept {
    switch (kernel_) {
      case Kernel::affine:
        return w_[0] * p[0] + w_[1] * p[1] + w_[2] * p[2] + w_[3];
      case Kernel::distance: {
        double d2 = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
          const double d = p[i] - w_[i];
          d2 += d * d;
        }
        return bias_ - radial_power(d2);
      }
      case Kernel::power_sum:
        return 1.0 - abs_power(p[0] - w_[0], spec_.a) - abs_power(p[1] - w_[1], spec_.b);
    }
    return 0.0;
  }

 private:
  enum class Kernel { affine, distance, power_sum };

  static double abs_power(double d, double e) noexcept {
    if (e == 1.0) return std::abs(d);
    if (e == 2.0) return d * d;
    return std::pow(std::abs(d), e);
  }

  double radial_power(double d2) const noexcept {
    if (spec_.alpha == 2.0) return d2;
    if (spec_.alpha == 1.0) return std::sqrt(d2);
    return std::pow(d2, 0.5 * spec_.alpha);
  }

  ObservableSpec spec_;
  Kernel kernel_ = Kernel::affine;
  std::array<double, 4> w_{};
  double bias_ = 1.0;
  std::size_t dim_ = 0;
};

// Exact value of the observable at a Cartesian point.
double eval(const ObservableSpec& obs, const StateVector& p);

struct SeriesMeta {
  std::string system;
  std::string observable;
  std::uint64_t seed = 0;
  std::optional<double> sample_interval;
};

struct ScalarSeries {
  std::vector<double> values;
  SeriesMeta meta;
};

// values[i] = eval(obs, to_cartesian(orbit[i])).
ScalarSeries series(const SystemSpec& system, const ObservableSpec& obs, const OrbitConfig& cfg);

}  // namespace exdyn
