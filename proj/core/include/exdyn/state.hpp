#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

namespace exdyn {

// A phase-space point with 2 or 3 real components.
class StateVector {
 public:
  StateVector() = default;
  StateVector(double x, double y) : c_{x, y, 0.0}, dim_(2) {}
  StateVector(double x, double y, double z) : c_{x, y, z}, dim_(3) {}

  // Throws ConfigError unless values.size() is 2 or 3.
  static StateVector from(std::span<const double> values);

  std::size_t dim() const noexcept { return dim_; }
  double operator[](std::size_t i) const noexcept { return c_[i]; }
  double& operator[](std::size_t i) noexcept { return c_[i]; }

  double x() const noexcept { return c_[0]; }
  double y() const noexcept { return c_[1]; }
  double z() const noexcept { return c_[2]; }

  std::span<const double> values() const noexcept { return {c_.data(), dim_}; }

  bool finite() const noexcept;

  std::string to_string() const;

  friend bool operator==(const StateVector& a, const StateVector& b) noexcept {
    if (a.dim_ != b.dim_) return false;
    for (std::size_t i = 0; i < a.dim_; ++i) {
      if (a.c_[i] != b.c_[i]) return false;
    }
    return true;
  }

 private:
  std::array<double, 3> c_{};
  std::uint8_t dim_ = 0;
};

// Small dense square matrix (n <= 3), row-major.
struct SquareMatrix {
  std::size_t n = 0;
  std::array<double, 9> a{};

  double operator()(std::size_t i, std::size_t j) const noexcept { return a[i * 3 + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return a[i * 3 + j]; }

  double determinant() const noexcept;
};

}  // namespace exdyn
